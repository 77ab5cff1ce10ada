//! Linear-algebra views of composition: block Krylov matrices and the
//! transposition identity relating them, characteristic polynomials, and
//! composition through inverse composition.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::polymat::pm_det;
use crate::relations::{ceil_div, mm_basis, TruncatedPowerTable};

/// `M_{t,u}`: multiplication by `t` modulo `u` in the basis `1, x, ..., x^(l-1)`, `l = deg u`.
pub fn mult_matrix(t: &Poly, u: &Poly) -> Result<Matrix> {
    let l = u.degree().ok_or(Error::DivisionByZero)?;
    let mut col = t.rem(u)?;
    let mut cols = Vec::with_capacity(l);
    for _ in 0..l {
        cols.push(col.clone());
        col = col.shift(1).rem(u)?;
    }
    Ok(Matrix::from_fn(u.field(), l, l, |i, j| cols[j].coeff(i)))
}

/// `K = [X  M X ... M^(d-1) X]` and `L = [X^T; X^T M; ...; X^T M^(d-1)]`
/// for `M = M_{a,f}` and `X = [I_m 0]^T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrylovPair {
    pub k: Matrix,
    pub l: Matrix,
}

pub fn build_krylov(f: &Poly, a: &Poly, m: usize, d: usize) -> Result<KrylovPair> {
    let n = f.degree().ok_or(Error::DivisionByZero)?;
    if m == 0 || m > n || d == 0 {
        return Err(Error::BadParameters(format!("Krylov blocks need 1 <= m <= n, d >= 1 (m={m}, n={n}, d={d})")));
    }
    let a = a.rem(f)?;
    // x^j a^k rem f for j < n, k < d
    let mut pw = Poly::one(f.field()).rem(f)?;
    let mut blocks: Vec<Vec<Poly>> = Vec::with_capacity(d);
    for _ in 0..d {
        let mut row = Vec::with_capacity(n);
        let mut xj = pw.clone();
        for _ in 0..n {
            row.push(xj.clone());
            xj = xj.shift(1).rem(f)?;
        }
        blocks.push(row);
        pw = pw.mulmod(&a, f)?;
    }
    let fld = f.field();
    let k = Matrix::from_fn(fld, n, m * d, |r, c| blocks[c / m][c % m].coeff(r));
    let l = Matrix::from_fn(fld, m * d, n, |r, c| blocks[r / m][c].coeff(r % m));
    Ok(KrylovPair { k, l })
}

/// `S` (triangular Hankel symmetrizer), `Q_m = -M_{f,x^m} J_m` and `P_n = M_{x^m,f} S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredMats {
    pub s: Matrix,
    pub q_m: Matrix,
    pub p_n: Matrix,
}

pub fn build_structured(f: &Poly, m: usize) -> Result<StructuredMats> {
    let n = f.degree().ok_or(Error::DivisionByZero)?;
    if m == 0 || m > n {
        return Err(Error::BadParameters(format!("need 1 <= m <= n (m={m}, n={n})")));
    }
    let fld = f.field();
    let s = Matrix::from_fn(fld, n, n, |i, j| if i + j < n { f.coeff(i + j + 1) } else { 0 });
    let xm = Poly::monomial(fld, 1, m);
    let rev = Matrix::from_fn(fld, m, m, |i, j| u64::from(i + j + 1 == m));
    let mf = mult_matrix(f, &xm)?;
    let q_m = mf.mul(&rev)?;
    let q_m = Matrix::from_fn(fld, m, m, |i, j| fld.neg(q_m[(i, j)]));
    let p_n = mult_matrix(&xm, f)?.mul(&s)?;
    Ok(StructuredMats { s, q_m, p_n })
}

/// Outcome of [`check_transposition_identity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranspositionReport {
    /// `L P_n = diag(Q_m, ..., Q_m) K^T`.
    pub transposition_holds: bool,
    /// `S M^T = M S` for `M = M_{a,f}`.
    pub symmetrizer_holds: bool,
    pub q_invertible: bool,
    pub p_invertible: bool,
}

pub fn check_transposition_identity(f: &Poly, a: &Poly, m: usize, d: usize) -> Result<TranspositionReport> {
    let kp = build_krylov(f, a, m, d)?;
    let st = build_structured(f, m)?;
    let ma = mult_matrix(a, f)?;
    let q_blocks = Matrix::block_diag(&vec![st.q_m.clone(); d]);
    let lhs = kp.l.mul(&st.p_n)?;
    let rhs = q_blocks.mul(&kp.k.transpose())?;
    let sym_l = st.s.mul(&ma.transpose())?;
    let sym_r = ma.mul(&st.s)?;
    Ok(TranspositionReport {
        transposition_holds: lhs == rhs,
        symmetrizer_holds: sym_l == sym_r,
        q_invertible: st.q_m.det()? != 0,
        p_invertible: st.p_n.det()? != 0,
    })
}

/// A commutative ring of scalars for division-free algorithms.
pub trait Scalars {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

impl Scalars for Field {
    type E = FieldElement;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        Field::add(self, *a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        Field::sub(self, *a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        Field::mul(self, *a, *b)
    }
}

/// Dual numbers `K[z]/(z^2)`, elements `(u, v) = u + v z`.
#[derive(Clone, Copy, Debug)]
pub struct Dual(pub Field);

impl Scalars for Dual {
    type E = (FieldElement, FieldElement);
    fn zero(&self) -> Self::E {
        (0, 0)
    }
    fn one(&self) -> Self::E {
        (1, 0)
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        (self.0.add(a.0, b.0), self.0.add(a.1, b.1))
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        (self.0.sub(a.0, b.0), self.0.sub(a.1, b.1))
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        let f = self.0;
        (f.mul(a.0, b.0), f.add(f.mul(a.0, b.1), f.mul(a.1, b.0)))
    }
}

/// `det(y I - A)` of a square matrix (row-major rows), coefficients
/// low-to-high, by Berkowitz's division-free recurrence.
pub fn berkowitz<R: Scalars>(ring: &R, a: &[Vec<R::E>]) -> Vec<R::E> {
    let n = a.len();
    // prev: characteristic polynomial of the trailing block, high-to-low
    let mut prev = vec![ring.one()];
    for i in (0..n).rev() {
        let s = n - i;
        let mut t = Vec::with_capacity(s + 1);
        t.push(ring.one());
        t.push(ring.sub(&ring.zero(), &a[i][i]));
        // v = A1^k C
        let mut v: Vec<R::E> = (i + 1..n).map(|r| a[r][i].clone()).collect();
        for _ in 0..s.saturating_sub(1) {
            let rv = (i + 1..n).fold(ring.zero(), |acc, c| ring.add(&acc, &ring.mul(&a[i][c], &v[c - i - 1])));
            t.push(ring.sub(&ring.zero(), &rv));
            v = (i + 1..n)
                .map(|r| (i + 1..n).fold(ring.zero(), |acc, c| ring.add(&acc, &ring.mul(&a[r][c], &v[c - i - 1]))))
                .collect();
        }
        let mut next = vec![ring.zero(); s + 1];
        for (j, slot) in next.iter_mut().enumerate() {
            for (l, p) in prev.iter().enumerate() {
                if j >= l && j - l < t.len() {
                    *slot = ring.add(slot, &ring.mul(&t[j - l], p));
                }
            }
        }
        prev = next;
    }
    prev.reverse();
    prev
}

/// How [`charpoly`] computes `chi_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharpolyVia {
    /// Determinant of a certified `M_mu` basis made monic; `None` picks `ceil(sqrt n)`.
    Basis(Option<usize>),
    Berkowitz,
}

/// Characteristic polynomial of multiplication by `a` modulo `f`, as a
/// monic polynomial in `y`.
pub fn charpoly(a: &Poly, f: &Poly, via: CharpolyVia) -> Result<Poly> {
    let n = f.degree().ok_or(Error::DivisionByZero)?;
    let fld = f.field();
    match via {
        CharpolyVia::Berkowitz => {
            let m = mult_matrix(a, f)?;
            let rows: Vec<Vec<u64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
            Ok(Poly::new(fld, berkowitz(&fld, &rows)))
        }
        CharpolyVia::Basis(mu) => {
            let mu = mu.unwrap_or_else(|| crate::compose::ceil_sqrt(n)).max(1);
            let table = TruncatedPowerTable::direct(f, a, mu, 2 * ceil_div(n, mu)).map_err(|e| match e {
                Error::NotInvertibleModF { .. } => Error::NonGeneric(crate::error::NonGenericReason::NotCoprime),
                e => e,
            })?;
            let basis = mm_basis(f, a, mu, &table)?;
            Ok(pm_det(&basis.matrix)?.make_monic())
        }
    }
}

/// `chi_(a + z h)` modulo `z^2`, split as `(chi_a, d/dz at 0)`.
fn dual_charpoly(a: &Poly, h: &Poly, f: &Poly) -> Result<(Poly, Poly)> {
    let n = f.degree().ok_or(Error::DivisionByZero)?;
    let fld = f.field();
    let ma = mult_matrix(a, f)?;
    let mh = mult_matrix(h, f)?;
    let rows: Vec<Vec<(u64, u64)>> = (0..n).map(|i| (0..n).map(|j| (ma[(i, j)], mh[(i, j)])).collect()).collect();
    let cp = berkowitz(&Dual(fld), &rows);
    Ok((
        Poly::new(fld, cp.iter().map(|c| c.0).collect()),
        Poly::new(fld, cp.iter().map(|c| c.1).collect()),
    ))
}

/// The unique `g` of degree `< n` with `g(a) = h mod f`, assuming `chi_a`
/// is separable.
pub fn inverse_compose(h: &Poly, a: &Poly, f: &Poly) -> Result<Poly> {
    let n = f.degree().ok_or(Error::DivisionByZero)?;
    let (chi, dchi) = dual_charpoly(a, &h.rem(f)?, f)?;
    let deriv = chi.derivative();
    if chi.degree() != Some(n) || deriv.is_zero() || chi.gcd(&deriv)?.degree() != Some(0) {
        return Err(Error::MinimalPolynomialDefect);
    }
    let inv = deriv.inv_mod(&chi).map_err(|_| Error::MinimalPolynomialDefect)?;
    (-&inv.mulmod(&dchi, &chi)?).rem(&chi)
}

/// `g(a) rem f` from two inverse compositions: `alpha(a) = x mod f`, then
/// `gamma(alpha) = g mod chi_a`; `gamma` is the answer.
pub fn compose_via_charpoly(g: &Poly, a: &Poly, f: &Poly) -> Result<Poly> {
    let fld = f.field();
    if f.degree() == Some(0) {
        return Ok(Poly::zero(fld));
    }
    let alpha = inverse_compose(&Poly::x(fld), a, f)?;
    let chi = charpoly(a, f, CharpolyVia::Berkowitz)?;
    inverse_compose(&g.rem(&chi)?, &alpha, &chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compose::horner_compose;

    fn f7() -> Field {
        Field::new(7).unwrap()
    }

    struct Rng(u64);
    impl Rng {
        fn next(&mut self) -> u64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            self.0 >> 33
        }
        fn poly(&mut self, f: Field, len: usize) -> Poly {
            Poly::new(f, (0..len).map(|_| self.next()).collect())
        }
        fn monic(&mut self, f: Field, n: usize) -> Poly {
            let mut c: Vec<u64> = (0..n).map(|_| self.next()).collect();
            c[0] |= 1;
            c.push(1);
            Poly::new(f, c)
        }
    }

    #[test]
    fn matrices_examples() {
        let f = f7();
        let m = Poly::new(f, vec![1, 0, 1]);
        let kp = build_krylov(&m, &Poly::x(f), 1, 1).unwrap();
        assert_eq!(kp.k, Matrix::from_rows(f, &[vec![1], vec![0]]));
        let st = build_structured(&m, 1).unwrap();
        assert_eq!(st.s, Matrix::from_rows(f, &[vec![0, 1], vec![1, 0]]));
        assert_eq!(mult_matrix(&Poly::x(f), &m).unwrap(), Matrix::from_rows(f, &[vec![0, 6], vec![1, 0]]));
        assert!(matches!(build_krylov(&m, &Poly::x(f), 3, 1), Err(Error::BadParameters(_))));
    }

    #[test]
    fn transposition_examples() {
        let f = f7();
        let m = Poly::new(f, vec![1, 0, 1]);
        let r = check_transposition_identity(&m, &Poly::x(f), 1, 2).unwrap();
        assert!(r.transposition_holds && r.symmetrizer_holds && r.q_invertible && r.p_invertible);

        let g = Field::p998();
        let mut rng = Rng(1);
        for n in 1..=16 {
            let fm = rng.monic(g, n);
            let a = rng.poly(g, n);
            let r = check_transposition_identity(&fm, &a, 1 + n / 3, 3).unwrap();
            assert!(r.transposition_holds && r.symmetrizer_holds && r.q_invertible && r.p_invertible, "n={n}");
        }
        let x0 = rng.monic(g, 7).shift(1);
        let r = check_transposition_identity(&x0, &rng.poly(g, 8), 3, 2).unwrap();
        assert!(r.transposition_holds && r.symmetrizer_holds);
        assert!(!r.q_invertible && !r.p_invertible);
    }

    #[test]
    fn charpoly_examples() {
        let f = f7();
        let m = Poly::new(f, vec![1, 0, 1]);
        for via in [CharpolyVia::Berkowitz, CharpolyVia::Basis(None)] {
            assert_eq!(charpoly(&Poly::x(f), &m, via).unwrap(), m);
        }
        assert_eq!(charpoly(&Poly::zero(f), &m, CharpolyVia::Berkowitz).unwrap(), Poly::monomial(f, 1, 2));
        assert!(matches!(charpoly(&Poly::zero(f), &m, CharpolyVia::Basis(None)), Err(Error::NonGeneric(_))));

        let g = Field::p998();
        let mut rng = Rng(2);
        for n in 2..=24 {
            let fm = rng.monic(g, n);
            let a = rng.poly(g, n);
            let b = charpoly(&a, &fm, CharpolyVia::Berkowitz).unwrap();
            assert_eq!(charpoly(&a, &fm, CharpolyVia::Basis(None)).unwrap(), b, "n={n}");
            // Cayley-Hamilton in the quotient ring
            assert!(horner_compose(&b, &a, &fm).unwrap().is_zero());
        }
    }

    #[test]
    fn berkowitz_dual_numbers() {
        let f = Field::p998();
        // [[z, 1], [0, 2]]: (y - z)(y - 2) = y^2 - (2 + z) y + 2z
        let rows = vec![vec![(0, 1), (1, 0)], vec![(0, 0), (2, 0)]];
        let cp = berkowitz(&Dual(f), &rows);
        assert_eq!(cp, vec![(0, 2), (f.neg(2), f.neg(1)), (1, 0)]);
    }

    #[test]
    fn inverse_composition() {
        let f = f7();
        let m = Poly::new(f, vec![1, 0, 1]);
        assert_eq!(inverse_compose(&Poly::x(f), &Poly::x(f), &m).unwrap(), Poly::x(f));
        let g = Field::p998();
        let mut rng = Rng(3);
        for n in 1..=20 {
            let fm = rng.monic(g, n);
            let a = rng.poly(g, n);
            if n >= 2 {
                assert_eq!(inverse_compose(&a, &a, &fm).unwrap(), Poly::x(g));
            }
            let h = rng.poly(g, n);
            let gi = inverse_compose(&h, &a, &fm).unwrap();
            assert!(gi.len() <= n);
            assert_eq!(horner_compose(&gi, &a, &fm).unwrap(), h.rem(&fm).unwrap(), "n={n}");
        }
        let sq = Poly::new(g, vec![1, 2, 1]);
        assert_eq!(inverse_compose(&Poly::x(g), &Poly::x(g), &sq), Err(Error::MinimalPolynomialDefect));
    }

    #[test]
    fn composition_via_charpoly() {
        let f = f7();
        let m = Poly::new(f, vec![1, 0, 1]);
        assert_eq!(compose_via_charpoly(&Poly::x(f), &Poly::new(f, vec![3, 2]), &m).unwrap(), Poly::new(f, vec![3, 2]));
        let g3 = Poly::new(f, vec![5, 0, 1, 4]);
        assert_eq!(compose_via_charpoly(&g3, &Poly::x(f), &m).unwrap(), horner_compose(&g3, &Poly::x(f), &m).unwrap());
        let g = Field::p998();
        let mut rng = Rng(4);
        for n in 1..=16 {
            let fm = rng.monic(g, n);
            let (gg, a) = (rng.poly(g, 2 * n), rng.poly(g, n));
            assert_eq!(compose_via_charpoly(&gg, &a, &fm).unwrap(), horner_compose(&gg, &a, &fm).unwrap(), "n={n}");
        }
    }
}
