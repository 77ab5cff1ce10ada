//! Truncated powers `[b a^k rem f]_0^(m-1)` without forming the full powers.
//!
//! Polynomials over `K[y]/(y^k)` are [`BiPoly`] values whose `x` is the main
//! variable; products are exact bivariate products followed by a `y`
//! truncation.

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::polymat::{PolyMatrix, Var};
use crate::relations::{PowersAB, TruncatedPowerTable};

/// `x^k p(1/x)` applied to every `y`-coefficient; requires `xdegree <= k`.
fn x_reverse(p: &BiPoly, k: usize) -> Result<BiPoly> {
    if let Some(d) = p.xdegree() {
        if d > k {
            return Err(Error::DegreeOverflow { degree: d, bound: k });
        }
    }
    Ok(BiPoly::from_fn(p.field(), k + 1, p.ybound(), |i, j| p.get(k - i, j)))
}

fn monic_modulus(f: &Poly) -> Result<(Poly, usize)> {
    let n = f.degree().ok_or(Error::DivisionByZero)?;
    Ok((f.make_monic(), n))
}

/// High part `[P Q rem f]_(n-t)^(t-1)` from `[P]_(n-t-d+1)^(t+d-2)` and
/// `Q` of `x`-degree `< d`, over `K[y]/(y^ybound)`.
pub fn high_part_rem(p_high: &BiPoly, q: &BiPoly, f: &Poly, t: usize, d: usize, ybound: usize) -> Result<BiPoly> {
    let (f, n) = monic_modulus(f)?;
    if d == 0 || d > n || t == 0 || t > n + 1 - d {
        return Err(Error::BadParameters(format!("high part needs 1<=d<=n, 1<=t<=n-d+1 (n={n}, d={d}, t={t})")));
    }
    if p_high.xdegree().is_some_and(|e| e >= t + d - 1) || q.xdegree().is_some_and(|e| e >= d) {
        return Err(Error::BadParameters("slice or multiplier exceeds its degree bound".into()));
    }
    let fld = f.field();
    let p_high = p_high.resized(t + d - 1, ybound);
    let q = q.resized(d, ybound);
    let h = if d >= 2 {
        // reversed P modulo x^(d-1) is the top of the slice, reversed
        let pbar = BiPoly::from_fn(fld, d - 1, ybound, |i, j| p_high.get(t + d - 2 - i, j));
        let qbar = x_reverse(&q, d - 1)?;
        let fbar = f.reverse(n)?;
        let inv = fbar.series_inv(d - 1)?;
        let hbar = pbar
            .mul_trunc_y(&qbar, ybound)?
            .truncate_x(d - 1)
            .mul_x_poly(&inv)?
            .truncate_x(d - 1)
            .truncate_y(ybound);
        x_reverse(&hbar, d - 2)?
    } else {
        BiPoly::zero(fld, 1, ybound)
    };
    let f_slice = f.slice(n + 1 - t - d, t + d - 2);
    let lhs = p_high.mul_trunc_y(&q, ybound)?;
    let rhs = h.mul_x_poly(&f_slice)?.truncate_y(ybound);
    Ok(lhs.sub(&rhs)?.x_slice(d - 1, t - 1))
}

/// Field-coefficient convenience wrapper around [`high_part_rem`].
pub fn high_part_rem_field(p_high: &Poly, q: &Poly, f: &Poly, t: usize, d: usize) -> Result<Poly> {
    let ph = BiPoly::from_x_poly(p_high, p_high.len().max(1))?;
    let qq = BiPoly::from_x_poly(q, q.len().max(1))?;
    let r = high_part_rem(&ph, &qq, f, t, d, 1)?;
    Ok(r.y_coeff(0))
}

/// `R_j = [x^(n-delta) h eta_j rem f]_0^(m-1)` for every `j`.
///
/// `h` has `x`-degree `< delta` and `y`-bound `mu_hat`; the `eta_j` have
/// `x`-degree `< delta` and a common `y`-bound `mu`. The result has `y`-bound
/// `mu + mu_hat - 1`.
pub fn sim_trunc_products(f: &Poly, h: &BiPoly, eta: &[BiPoly], m: usize, delta: usize) -> Result<Vec<BiPoly>> {
    let (f, n) = monic_modulus(f)?;
    let fld = f.field();
    let Some(mu) = eta.first().map(BiPoly::ybound) else {
        return Ok(Vec::new());
    };
    let mu_hat = h.ybound();
    if delta == 0 || delta > n || m == 0 || mu == 0 || eta.iter().any(|e| e.ybound() != mu) {
        return Err(Error::BadParameters(format!("truncated products: n={n}, delta={delta}, m={m}")));
    }
    if h.xdegree().is_some_and(|d| d >= delta) || eta.iter().any(|e| e.xdegree().is_some_and(|d| d >= delta)) {
        return Err(Error::BadParameters("truncated products: x-degree must be below delta".into()));
    }
    let ry = 2 * mu - 1;
    let segs = mu_hat.div_ceil(mu);
    let hseg: Vec<BiPoly> = (0..segs)
        .map(|i| BiPoly::from_fn(fld, delta, mu, |a, b| h.get(a, i * mu + b)))
        .collect();
    let eta: Vec<BiPoly> = eta.iter().map(|e| e.resized(delta, mu)).collect();

    // low coefficients of the quotients of x^(n-delta) h_i eta_j by f
    let qlen = m.min(delta.saturating_sub(1));
    let mut quot = vec![vec![BiPoly::zero(fld, qlen.max(1), ry); eta.len()]; segs];
    if qlen > 0 {
        let hi = delta - 2;
        let lo = (delta - 1).saturating_sub(m);
        let fbar = f.reverse(n)?;
        let inv = fbar.series_inv(delta - 1)?;
        let hbar: Vec<BiPoly> = hseg
            .iter()
            .map(|p| Ok(x_reverse(p, delta - 1)?.truncate_x(delta - 1)))
            .collect::<Result<_>>()?;
        let gamma: Vec<BiPoly> = eta
            .iter()
            .map(|e| Ok(x_reverse(e, delta - 1)?.mul_x_poly(&inv)?.truncate_x(delta - 1)))
            .collect::<Result<_>>()?;
        let blocks = (delta - 1).div_ceil(m);
        let piece = |p: &BiPoly, u: usize| p.x_slice(u * m, m - 1);
        let stride = 2 * m - 1;
        let mut window = vec![vec![BiPoly::zero(fld, hi - lo + 1, ry); eta.len()]; segs];
        let s_lo = (lo + 2).saturating_sub(2 * m).div_ceil(m);
        for s in s_lo..=hi / m {
            let us: Vec<usize> = (0..blocks).filter(|&u| u <= s && s - u < blocks).collect();
            if us.is_empty() {
                continue;
            }
            let pm = PolyMatrix::from_fn(fld, segs, us.len(), Var::X, |i, c| piece(&hbar[i], us[c]).kronecker_pack(stride));
            let qm = PolyMatrix::from_fn(fld, us.len(), eta.len(), Var::X, |c, j| {
                piece(&gamma[j], s - us[c]).kronecker_pack(stride)
            });
            let prod = pm.mul(&qm)?;
            for (i, row) in window.iter_mut().enumerate() {
                for (j, w) in row.iter_mut().enumerate() {
                    let c = BiPoly::kronecker_unpack(prod.get(i, j), stride, stride, ry);
                    for e in 0..stride {
                        let pos = s * m + e;
                        if pos < lo || pos > hi {
                            continue;
                        }
                        for b in 0..ry {
                            let v = fld.add(w.get(pos - lo, b), c.get(e, b));
                            w.set(pos - lo, b, v);
                        }
                    }
                }
            }
        }
        for i in 0..segs {
            for j in 0..eta.len() {
                // q_e is coefficient delta-2-e of the reversed quotient
                quot[i][j] = BiPoly::from_fn(fld, qlen, ry, |e, b| window[i][j].get(hi - e - lo, b));
            }
        }
    }

    let f_low = f.truncate(m);
    let shift = n - delta;
    let ybound_out = mu + mu_hat - 1;
    let mut out = vec![BiPoly::zero(fld, m, segs * mu + mu - 1); eta.len()];
    for (i, hi_seg) in hseg.iter().enumerate() {
        let h_low = hi_seg.shift(shift, 0).truncate_x(m);
        for (j, e) in eta.iter().enumerate() {
            let prod = h_low.mul(&e.truncate_x(m))?.truncate_x(m);
            let corr = quot[i][j].mul_x_poly(&f_low)?.truncate_x(m);
            let rij = prod.sub(&corr)?.resized(m, ry);
            out[j] = out[j].add(&rij.shift(0, i * mu))?.resized(m, segs * mu + mu - 1);
        }
    }
    Ok(out.into_iter().map(|r| r.resized(m, ybound_out)).collect())
}

fn direct_truncations(f: &Poly, a: &Poly, b: &Poly, m: usize, count: usize) -> Result<Vec<Poly>> {
    let mut c = b.rem(f)?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(c.truncate(m));
        c = c.mulmod(a, f)?;
    }
    Ok(out)
}

/// `[b a^k rem f]_0^(m-1)` for `k < d`, using the `A_j`, `B_j` tables of
/// `(f, a)` with `d <= mu^3`.
pub fn truncated_powers(f: &Poly, a: &Poly, b: &Poly, m: usize, d: usize, tables: &PowersAB) -> Result<Vec<Poly>> {
    tables.check(f, a)?;
    let (fm, n) = monic_modulus(f)?;
    let fld = f.field();
    let mu = tables.mu();
    let delta = tables.delta();
    if m == 0 || d > mu * mu * mu || mu > n {
        return Err(Error::BadParameters(format!("truncated powers: m={m}, d={d}, mu={mu}, n={n}")));
    }
    let a = a.rem(f)?;
    let b = b.rem(f)?;
    let n0 = 3 * mu - 2;
    let n1 = mu * mu + mu - 1;
    if mu == 1 || d <= n0 {
        return direct_truncations(&fm, &a, &b, m, d);
    }

    // Step 1: D0 in full
    let c0 = direct_truncations(&fm, &a, &b, n, n0)?;
    let d0 = BiPoly::from_y_coeffs(fld, n, &c0)?;
    let alpha: Vec<BiPoly> = (1..mu).map(|j| tables.a[j].y_reverse(mu)).collect::<Result<_>>()?;
    let beta: Vec<BiPoly> = (1..mu).map(|j| tables.b[j].y_reverse(mu)).collect::<Result<_>>()?;
    // index placement of c_e inside the products with alpha_j (resp. beta_j)
    let place0 = |e: usize| {
        let j = (e / mu).min(mu - 1);
        (j, e + mu - 1 - j * mu)
    };
    let place1 = |e: usize| {
        let j = e / (mu * mu);
        (j, e + mu - 1 - j * mu * mu)
    };

    // Step 2: high part [D1]_(n-delta)^(delta-1)
    let hi1 = if 2 * delta <= n + 1 {
        let slice = d0.x_slice(n + 1 - 2 * delta, 2 * delta - 2);
        let hp: Vec<BiPoly> = alpha
            .iter()
            .map(|al| high_part_rem(&slice, al, &fm, delta, delta, n0))
            .collect::<Result<_>>()?;
        BiPoly::from_fn(fld, delta, n1, |i, e| {
            if e < n0 {
                d0.get(n - delta + i, e)
            } else {
                let (j, k) = place0(e);
                hp[j - 1].get(i, k)
            }
        })
    } else {
        let c1 = direct_truncations(&fm, &a, &b, n, n1)?;
        BiPoly::from_y_coeffs(fld, n, &c1)?.x_slice(n - delta, delta - 1)
    };

    // Step 3: low parts of D1, then of D2
    let below = n - delta;
    let low_of = |p: &BiPoly| BiPoly::from_fn(fld, m, p.ybound(), |i, j| if i < below { p.get(i, j) } else { 0 });
    let lo0 = low_of(&d0);
    let hi0 = d0.x_slice(below, delta - 1);
    let r0 = sim_trunc_products(&fm, &hi0, &alpha, m, delta)?;
    let prods0: Vec<BiPoly> = alpha
        .iter()
        .zip(&r0)
        .map(|(al, r)| lo0.mul_trunc_y(&al.truncate_x(m), n0)?.truncate_x(m).add(&r.truncate_y(n0)))
        .collect::<Result<_>>()?;
    let d1_low = BiPoly::from_fn(fld, m, n1, |i, e| {
        if e < n0 {
            d0.get(i, e)
        } else {
            let (j, k) = place0(e);
            prods0[j - 1].get(i, k)
        }
    });

    let lo1 = low_of(&d1_low);
    let r1 = sim_trunc_products(&fm, &hi1, &beta, m, delta)?;
    let mut out = Vec::with_capacity(d);
    let prods1: Vec<BiPoly> = beta
        .iter()
        .zip(&r1)
        .map(|(be, r)| lo1.mul_trunc_y(&be.truncate_x(m), n1)?.truncate_x(m).add(&r.truncate_y(n1)))
        .collect::<Result<_>>()?;
    for e in 0..d {
        let (j, k) = place1(e);
        let src = if j == 0 { &d1_low } else { &prods1[j - 1] };
        let col = if j == 0 { e } else { k };
        out.push(src.y_coeff(col).truncate(m));
    }
    Ok(out)
}

/// Table `[x^i c_r rem f]_0^(m-1)` for `i < m` from `rows[r] = [x^(m-1) c_r rem f]_0^(2m-2)`,
/// stepping down with `v_(i-1) = (v_i - (v_i(0)/f(0)) f) / x`.
pub fn recover_shifted_truncations(f: &Poly, rows: &[Poly], m: usize) -> Result<TruncatedPowerTable> {
    let fld = f.field();
    if f.coeff(0) == 0 {
        return Err(Error::NeedsUnitConstantTerm);
    }
    if m == 0 {
        return Err(Error::BadParameters("m must be positive".into()));
    }
    let inv_f0 = fld.inv(f.coeff(0))?;
    let mut entries = vec![Vec::with_capacity(rows.len()); m];
    for row in rows {
        let mut v: Vec<u64> = (0..2 * m - 1).map(|i| row.coeff(i)).collect();
        entries[m - 1].push(Poly::from_reduced(fld, v[..m].to_vec()));
        for i in (0..m - 1).rev() {
            let lam = fld.mul(v[0], inv_f0);
            let next: Vec<u64> = (1..v.len()).map(|e| fld.sub(v[e], fld.mul(lam, f.coeff(e)))).collect();
            v = next;
            entries[i].push(Poly::from_reduced(fld, v[..m].to_vec()));
        }
    }
    TruncatedPowerTable::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::relations::powers_ab;

    struct Rng(u64);
    impl Rng {
        fn next(&mut self) -> u64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            self.0 >> 33
        }
        fn poly(&mut self, f: Field, len: usize) -> Poly {
            Poly::new(f, (0..len).map(|_| self.next()).collect())
        }
        fn bipoly(&mut self, f: Field, xb: usize, yb: usize) -> BiPoly {
            BiPoly::from_fn(f, xb, yb, |_, _| self.next())
        }
        fn monic(&mut self, f: Field, n: usize) -> Poly {
            let mut c: Vec<u64> = (0..n).map(|_| self.next()).collect();
            c[0] |= 1;
            c.push(1);
            Poly::new(f, c)
        }
    }

    fn f7() -> Field {
        Field::new(7).unwrap()
    }

    #[test]
    fn high_part_examples() {
        let f = f7();
        let m = Poly::new(f, vec![1, 0, 1]);
        let p = Poly::new(f, vec![3, 5]);
        let r = high_part_rem_field(&p.slice(1, 0), &Poly::one(f), &m, 1, 1).unwrap();
        assert_eq!(r, Poly::constant(f, 5));

        let g = Field::p998();
        let mut rng = Rng(4);
        let fm = rng.monic(g, 12);
        let p = rng.poly(g, 12);
        let q = rng.poly(g, 1);
        let full = p.mulmod(&q, &fm).unwrap();
        assert_eq!(high_part_rem_field(&p.slice(0, 11), &q, &fm, 12, 1).unwrap(), full);
        assert!(matches!(high_part_rem_field(&p, &q, &fm, 13, 1), Err(Error::BadParameters(_))));
    }

    #[test]
    fn high_part_over_truncated_ring() {
        let g = Field::p998();
        let mut rng = Rng(5);
        let (n, d, t, k) = (40, 7, 12, 5);
        let fm = rng.monic(g, n);
        let p = rng.bipoly(g, n, k);
        let q = rng.bipoly(g, d, k);
        let full = p.mul_trunc_y(&q, k).unwrap().rem_x(&fm).unwrap();
        let want = full.x_slice(n - t, t - 1);
        let got = high_part_rem(&p.x_slice(n - t - d + 1, t + d - 2), &q, &fm, t, d, k).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn sim_products_examples() {
        let g = Field::p998();
        let mut rng = Rng(6);
        let fm = rng.monic(g, 10);
        let eta = vec![rng.bipoly(g, 4, 2)];
        let z = BiPoly::zero(g, 4, 3);
        assert!(sim_trunc_products(&fm, &z, &eta, 3, 4).unwrap().iter().all(BiPoly::is_zero));

        // mu = 1, delta = n
        let h = rng.bipoly(g, 10, 1);
        let e = rng.bipoly(g, 10, 1);
        let r = sim_trunc_products(&fm, &h, std::slice::from_ref(&e), 4, 10).unwrap();
        let want = h.y_coeff(0).mulmod(&e.y_coeff(0), &fm).unwrap().truncate(4);
        assert_eq!(r[0].y_coeff(0), want);
    }

    #[test]
    fn sim_products_match_brute_force() {
        let g = Field::p998();
        let mut rng = Rng(7);
        for &(n, delta, mu, mu_hat, m) in &[(48, 12, 2, 5, 4), (30, 9, 3, 7, 2), (20, 20, 2, 3, 25), (16, 5, 2, 4, 13)] {
            let fm = &rng.monic(g, n) * &Poly::constant(g, 3);
            let h = rng.bipoly(g, delta, mu_hat);
            let eta: Vec<BiPoly> = (0..mu).map(|_| rng.bipoly(g, delta, mu)).collect();
            let r = sim_trunc_products(&fm, &h, &eta, m, delta).unwrap();
            for (j, e) in eta.iter().enumerate() {
                let want = h.shift(n - delta, 0).mul(e).unwrap().rem_x(&fm).unwrap().resized(m, mu + mu_hat - 1);
                assert_eq!(r[j], want, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn truncated_powers_tiny_example() {
        let f = f7();
        let m = Poly::new(f, vec![1, 0, 1]);
        let t = powers_ab(&m, &Poly::x(f), 2).unwrap();
        let out = truncated_powers(&m, &Poly::x(f), &Poly::one(f), 1, 3, &t).unwrap();
        let want: Vec<Poly> = [1, 0, 6].iter().map(|&c| Poly::constant(f, c)).collect();
        assert_eq!(out, want);
        let zero = truncated_powers(&m, &Poly::x(f), &Poly::zero(f), 1, 3, &t).unwrap();
        assert!(zero.iter().all(Poly::is_zero));
    }

    #[test]
    fn truncated_powers_match_direct() {
        let g = Field::p998();
        let mut rng = Rng(8);
        for &(n, m, d, mu) in &[(81, 3, 27, 3), (40, 5, 30, 4), (64, 7, 60, 4), (30, 2, 8, 2), (12, 4, 20, 3)] {
            let fm = rng.monic(g, n);
            let a = rng.poly(g, n);
            let b = rng.poly(g, n);
            let t = powers_ab(&fm, &a, mu).unwrap();
            let got = truncated_powers(&fm, &a, &b, m, d, &t).unwrap();
            assert_eq!(got, direct_truncations(&fm, &a, &b, m, d).unwrap(), "n={n} m={m} d={d} mu={mu}");
        }
    }

    #[test]
    fn stale_tables_rejected() {
        let g = Field::p998();
        let mut rng = Rng(9);
        let fm = rng.monic(g, 20);
        let a = rng.poly(g, 20);
        let t = powers_ab(&fm, &a, 3).unwrap();
        let other = rng.poly(g, 20);
        assert_eq!(truncated_powers(&fm, &other, &a, 3, 20, &t), Err(Error::StaleTables));
    }

    #[test]
    fn recover_examples() {
        let f = f7();
        let m = Poly::new(f, vec![1, 0, 1]);
        let inv = Poly::new(f, vec![0, 6]);
        let row = Poly::x(f).mulmod(&inv, &m).unwrap().slice(0, 2);
        let t = recover_shifted_truncations(&m, std::slice::from_ref(&row), 2).unwrap();
        assert_eq!(t.get(0, 0), &inv);
        assert_eq!(t.get(1, 0), &row.truncate(2));
        let t1 = recover_shifted_truncations(&m, std::slice::from_ref(&row), 1).unwrap();
        assert_eq!(t1.get(0, 0), &row.truncate(1));
        assert_eq!(recover_shifted_truncations(&Poly::x(f), &[row], 1), Err(Error::NeedsUnitConstantTerm));

        let g = Field::p998();
        let mut rng = Rng(10);
        let fm = rng.monic(g, 30);
        let c = rng.poly(g, 30);
        let mm = 5;
        let rows: Vec<Poly> = (0..4)
            .map(|k| c.powmod(k + 1, &fm).unwrap().shift(mm - 1).rem(&fm).unwrap().slice(0, 2 * mm - 2))
            .collect();
        let t = recover_shifted_truncations(&fm, &rows, mm).unwrap();
        for k in 0..4 {
            let mut v = c.powmod(k as u64 + 1, &fm).unwrap();
            for i in 0..mm {
                assert_eq!(t.get(i, k), &v.truncate(mm));
                v = v.shift(1).rem(&fm).unwrap();
            }
        }
    }
}
