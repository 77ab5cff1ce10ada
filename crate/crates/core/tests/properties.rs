use proptest::prelude::*;
use relcomp::bipoly::BiPoly;
use relcomp::compose::{
    bivariate_compose, brent_kung_compose, ceil_cbrt, horner_compose, nz_bivariate_compose, univariate_compose,
};
use relcomp::duality::{charpoly, inverse_compose, mult_matrix, CharpolyVia};
use relcomp::error::Error;
use relcomp::field::Field;
use relcomp::instance::{Instance, SplitMix64};
use relcomp::interp::multipoint_eval;
use relcomp::linalg::Matrix;
use relcomp::poly::Poly;
use relcomp::approximant::approximant_basis;
use relcomp::polymat::{form_predicates, mat_divrem, pm_det, popov, PolyMatrix, Shift, Var};
use relcomp::relations::{mm_basis, nmu_basis, powers_ab, TruncatedPowerTable};

fn p998() -> Field {
    Field::new(998244353).unwrap()
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// Columns `x^k v_i` (`k < blocks`) of coefficient vectors modulo `f`.
fn krylov_rank(f: &Poly, base: &[Poly], step: &Poly, blocks: usize) -> usize {
    let n = f.degree().unwrap();
    let mut cols = Vec::new();
    let mut cur: Vec<Poly> = base.iter().map(|b| b.rem(f).unwrap()).collect();
    for _ in 0..blocks {
        cols.extend(cur.iter().cloned());
        cur = cur.iter().map(|c| c.mulmod(step, f).unwrap()).collect();
    }
    Matrix::from_fn(f.field(), n, cols.len(), |i, j| cols[j].coeff(i)).rank()
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn field_inverse_and_axioms(x in any::<u64>(), y in any::<u64>(), z in any::<u64>()) {
        for f in [p998(), Field::goldilocks(), Field::new(7).unwrap()] {
            let (a, b, c) = (f.elem(x), f.elem(y), f.elem(z));
            if b != 0 {
                prop_assert_eq!(f.mul(f.mul(a, b), f.inv(b).unwrap()), a);
            }
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.mul(a, b) as u128, (a as u128 * b as u128) % f.modulus() as u128);
        }
    }

    #[test]
    fn ntt_round_trip(logn in 0u32..=12, seed in any::<u64>()) {
        let f = p998();
        let v = SplitMix64::new(seed).poly(f, 1 << logn).coeffs().to_vec();
        let mut v = { let mut w = v; w.resize(1 << logn, 0); w };
        let orig = v.clone();
        f.ntt_in_place(&mut v, false).unwrap();
        f.ntt_in_place(&mut v, true).unwrap();
        prop_assert_eq!(v, orig);
    }

    #[test]
    fn division_identity(seed in any::<u64>(), lu in 0usize..300, ld in 1usize..200) {
        let f = p998();
        let mut r = SplitMix64::new(seed);
        let u = r.poly(f, lu);
        let mut d = r.poly(f, ld);
        if d.is_zero() { d = Poly::one(f); }
        let (q, rem) = u.divrem(&d).unwrap();
        prop_assert_eq!(&(&q * &d) + &rem, u);
        prop_assert!(rem.len() < d.len() || rem.is_zero());
    }

    #[test]
    fn series_inverse(seed in any::<u64>(), k in 1usize..300) {
        let f = p998();
        let mut r = SplitMix64::new(seed);
        let u = Poly::new(f, std::iter::once(r.nonzero(&f)).chain((1..k).map(|_| r.element(&f))).collect());
        let inv = u.series_inv(k).unwrap();
        prop_assert_eq!((&inv * &u).truncate(k), Poly::one(f));
    }

    #[test]
    fn powmod_adds_exponents(seed in any::<u64>(), n in 1usize..40, e1 in 0u64..500, e2 in 0u64..500) {
        let f = p998();
        let mut r = SplitMix64::new(seed);
        let m = r.modulus(f, n);
        let a = r.poly(f, n);
        let lhs = a.powmod(e1 + e2, &m).unwrap();
        let rhs = a.powmod(e1, &m).unwrap().mulmod(&a.powmod(e2, &m).unwrap(), &m).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tree_evaluation_matches_horner(seed in any::<u64>(), len in 0usize..100, k in 1usize..=64) {
        let f = p998();
        let mut r = SplitMix64::new(seed);
        let u = r.poly(f, len);
        let pts: Vec<u64> = (0..k).map(|_| r.element(&f)).collect();
        let want: Vec<u64> = pts.iter().map(|&x| u.eval(x)).collect();
        prop_assert_eq!(multipoint_eval(&u, &pts), want);
    }

    #[test]
    fn kronecker_digits_round_trip(seed in any::<u64>(), m in 1usize..=5, mu in 1usize..=4) {
        let f = p998();
        let g = SplitMix64::new(seed).bipoly(f, m, mu * mu * mu);
        let back = g.inverse_kronecker(mu).unwrap().substitute();
        prop_assert_eq!(back.resized(m, mu * mu * mu), g);
    }

    #[test]
    fn eval_y_double_loop(seed in any::<u64>(), n in 1usize..20, xb in 1usize..8, yb in 1usize..8) {
        let f = p998();
        let mut r = SplitMix64::new(seed);
        let m = r.modulus(f, n);
        let a = r.poly(f, n);
        let g = r.bipoly(f, xb, yb);
        let mut want = Poly::zero(f);
        for i in 0..xb {
            for j in 0..yb {
                let term = Poly::monomial(f, g.get(i, j), i).mulmod(&a.powmod(j as u64, &m).unwrap(), &m).unwrap();
                want = &want + &term;
            }
        }
        prop_assert_eq!(g.eval_y(&a, &m).unwrap(), want.rem(&m).unwrap());
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn approximant_columns_are_approximants(seed in any::<u64>(), mu in 1usize..=3, cols in 1usize..=2, sigma in 1usize..=6) {
        let f = Field::new(97).unwrap();
        let mut r = SplitMix64::new(seed);
        let fm = PolyMatrix::from_fn(f, mu, cols, Var::X, |_, _| r.poly(f, sigma + 1));
        let shift = Shift((0..mu).map(|i| (r.below(3) as i64) - 1 + i as i64 % 2).collect());
        let b = approximant_basis(&fm, sigma, &shift).unwrap();
        prop_assert!(form_predicates(&b, &shift).unwrap().is_shifted_popov);
        let residual = b.transpose().mul(&fm).unwrap();
        for i in 0..mu {
            for j in 0..cols {
                prop_assert!(residual.get(i, j).truncate(sigma).is_zero());
            }
        }
        // the module contains v^sigma I, so det has degree at most sigma * cols
        prop_assert!(pm_det(&b).unwrap().degree().unwrap() <= sigma * cols);
    }

    #[test]
    fn column_reduced_degree_law(seed in any::<u64>(), k in 1usize..=4, len in 1usize..6) {
        let f = p998();
        let mut r = SplitMix64::new(seed);
        let m = PolyMatrix::from_fn(f, k, k, Var::X, |_, _| r.poly(f, len));
        let p = popov(&m, &Shift::zero(k)).unwrap();
        let rep = form_predicates(&p, &Shift::zero(k)).unwrap();
        prop_assert!(rep.is_column_reduced && rep.is_popov);
        prop_assert_eq!(pm_det(&p).unwrap().degree(), Some(rep.column_degrees.iter().sum()));
        prop_assert_eq!(pm_det(&p).unwrap().make_monic(), pm_det(&m).unwrap().make_monic());
    }

    #[test]
    fn matrix_division(seed in any::<u64>(), k in 1usize..=3, len in 1usize..5, vlen in 0usize..12) {
        let f = p998();
        let mut r = SplitMix64::new(seed);
        let rm = PolyMatrix::from_fn(f, k, k, Var::X, |_, _| r.poly(f, len));
        prop_assume!(!pm_det(&rm).unwrap().is_zero());
        let v: Vec<Poly> = (0..k).map(|_| r.poly(f, vlen)).collect();
        let (q, rem) = mat_divrem(&v, &rm).unwrap();
        let back = rm.mul_vec(&q).unwrap();
        for i in 0..k {
            prop_assert_eq!(&back[i] + &rem[i], v[i].clone());
        }
        let (_, again) = mat_divrem(&rem, &rm).unwrap();
        prop_assert_eq!(again, rem);
    }

    #[test]
    fn n_basis_degree_law(seed in any::<u64>(), n in 2usize..=24, mu in 1usize..=5) {
        let f = p998();
        let mut r = SplitMix64::new(seed);
        let m = r.modulus(f, n);
        let a = r.poly(f, n);
        let mu = mu.min(n);
        let b = nmu_basis(&m, &a, mu).unwrap();
        prop_assert_eq!(pm_det(&b.matrix).unwrap().make_monic(), m.clone());
        prop_assert!(n.div_ceil(mu) <= b.delta && b.delta <= n);
        // smallest delta with x^k a^i (k < delta, i < mu) spanning K[x]/(f)
        let pw: Vec<Poly> = (0..mu).map(|i| a.powmod(i as u64, &m).unwrap()).collect();
        prop_assert_eq!(krylov_rank(&m, &pw, &Poly::x(f), b.delta), n);
        prop_assert!(krylov_rank(&m, &pw, &Poly::x(f), b.delta - 1) < n);
    }

    #[test]
    fn m_basis_degree_law(seed in any::<u64>(), n in 2usize..=24, mm in 1usize..=5) {
        let f = p998();
        let mut r = SplitMix64::new(seed);
        let m = r.modulus(f, n);
        let a = r.poly(f, n);
        let mm = mm.min(n);
        let t = TruncatedPowerTable::direct(&m, &a, mm, 2 * n.div_ceil(mm)).unwrap();
        match mm_basis(&m, &a, mm, &t) {
            Ok(b) => {
                prop_assert_eq!(b.column_degrees().iter().sum::<usize>(), n);
                for j in 0..mm {
                    prop_assert!(b.relation(j).eval_y(&a, &m).unwrap().is_zero());
                }
                let xs: Vec<Poly> = (0..mm).map(|i| Poly::monomial(f, 1, i)).collect();
                prop_assert_eq!(krylov_rank(&m, &xs, &a, b.delta), n);
                prop_assert!(krylov_rank(&m, &xs, &a, b.delta - 1) < n);
                prop_assert_eq!(pm_det(&b.matrix).unwrap().make_monic(), charpoly(&a, &m, CharpolyVia::Berkowitz).unwrap());
            }
            Err(Error::NonGeneric(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn powers_tables_evaluate(seed in any::<u64>(), n in 2usize..=40, mu in 1usize..=4) {
        let f = p998();
        let mut r = SplitMix64::new(seed);
        let m = r.modulus(f, n);
        let a = r.poly(f, n);
        let mu = mu.min(n);
        let t = powers_ab(&m, &a, mu).unwrap();
        let amu = a.powmod(mu as u64, &m).unwrap();
        let amu2 = amu.powmod(mu as u64, &m).unwrap();
        for j in 0..mu {
            prop_assert!(t.a[j].xbound() <= t.delta().max(1) && t.a[j].ybound() <= mu);
            prop_assert!(t.b[j].xbound() <= t.delta().max(1) && t.b[j].ybound() <= mu);
            prop_assert_eq!(t.a[j].eval_y(&a, &m).unwrap(), amu.powmod(j as u64, &m).unwrap());
            prop_assert_eq!(t.b[j].eval_y(&a, &m).unwrap(), amu2.powmod(j as u64, &m).unwrap());
        }
    }

    #[test]
    fn compositions_agree(seed in any::<u64>(), n in 1usize..=70, glen in 0usize..150) {
        let inst = Instance::random(998244353, n, seed).unwrap();
        let f = inst.field;
        let g = SplitMix64::new(seed ^ 1).poly(f, glen);
        let want = horner_compose(&g, &inst.a, &inst.f).unwrap();
        prop_assert_eq!(brent_kung_compose(&g, &inst.a, &inst.f).unwrap(), want.clone());
        match univariate_compose(&g, &inst.a, &inst.f) {
            Ok(h) => prop_assert_eq!(h, want),
            Err(Error::NonGeneric(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn bivariate_compositions_agree(seed in any::<u64>(), n in 1usize..=60, xb in 1usize..=60, d in 1usize..=64) {
        // the block size is capped at n, so d <= mu^3 needs d <= n^3
        let d = d.min(n * n * n);
        let inst = Instance::random(998244353, n, seed).unwrap();
        let g: BiPoly = SplitMix64::new(seed ^ 2).bipoly(inst.field, xb.min(n), d);
        let want = g.eval_y(&inst.a, &inst.f).unwrap();
        prop_assert_eq!(nz_bivariate_compose(&g, &inst.a, &inst.f).unwrap(), want.clone());
        let tables = powers_ab(&inst.f, &inst.a, ceil_cbrt(d).clamp(1, n)).unwrap();
        prop_assert_eq!(bivariate_compose(&g, &inst.f, &inst.a, &tables).unwrap(), want);
    }

    #[test]
    fn symmetrizer_commutes_with_powers(seed in any::<u64>(), n in 1usize..=16) {
        let inst = Instance::random(998244353, n, seed).unwrap();
        let (f, a) = (&inst.f, &inst.a);
        let s = relcomp::duality::build_structured(f, 1).unwrap().s;
        for k in 0..4u64 {
            let mk = mult_matrix(&a.powmod(k, f).unwrap(), f).unwrap();
            prop_assert_eq!(s.mul(&mk.transpose()).unwrap(), mk.mul(&s).unwrap());
        }
    }

    #[test]
    fn inverse_composition_round_trip(seed in any::<u64>(), n in 1usize..=20) {
        let inst = Instance::random(998244353, n, seed).unwrap();
        let h = inst.g.clone();
        match inverse_compose(&h, &inst.a, &inst.f) {
            Ok(g) => prop_assert_eq!(horner_compose(&g, &inst.a, &inst.f).unwrap(), h),
            Err(Error::MinimalPolynomialDefect) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn instance_text_round_trip(p in prop::sample::select(vec![3u64, 7, 97, 998244353]), n in 1usize..30, seed in any::<u64>()) {
        let inst = Instance::random(p, n, seed).unwrap();
        prop_assert_eq!(Instance::parse(&inst.to_text()).unwrap(), inst);
    }
}
