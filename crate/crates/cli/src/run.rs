use std::time::{Duration, Instant};

use clap::ValueEnum;
use relcomp::bipoly::BiPoly;
use relcomp::compose::{
    brent_kung_compose, bivariate_compose, ceil_cbrt, ceil_sqrt, horner_compose, multipoint_eval_bivariate,
    nz_bivariate_compose, univariate_compose_timed, Composer,
};
use relcomp::duality::compose_via_charpoly;
use relcomp::error::{Error, Result};
use relcomp::field::{Field, FieldElement};
use relcomp::instance::Instance;
use relcomp::poly::Poly;
use relcomp::relations::powers_ab;

use crate::report::{millis, Row};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum ComposeAlgo {
    Horner,
    BrentKung,
    Relmat,
    Charpoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum BivAlgo {
    Nz,
    Kronecker,
}

/// Any algorithm a sweep can time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Algo {
    Horner,
    BrentKung,
    Relmat,
    Charpoly,
    Nz,
    Kronecker,
}

pub fn algo_name<A: ValueEnum>(a: A) -> String {
    a.to_possible_value().expect("no skipped variants").get_name().to_string()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub mu: usize,
    pub delta: usize,
}

/// Result of one timed run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub algo: String,
    pub params: Params,
    pub phases: Vec<(&'static str, Duration)>,
    pub total: Duration,
    pub generic: bool,
    /// `None` when verification was skipped.
    pub verified: Option<bool>,
    pub output: Vec<FieldElement>,
    pub warnings: Vec<String>,
}

impl Outcome {
    pub fn rows(&self, with_phases: bool) -> Vec<Row> {
        let p = self.params;
        let mk = |phase: &str, t: Duration| Row {
            algo: self.algo.clone(),
            n: p.n,
            m: p.m,
            d: p.d,
            mu: p.mu,
            delta: p.delta,
            phase: phase.to_string(),
            millis: millis(t),
            verified: self.verified == Some(true),
            generic: self.generic,
        };
        let mut rows = Vec::new();
        if with_phases {
            rows.extend(self.phases.iter().map(|&(ph, t)| mk(ph, t)));
        }
        rows.push(mk("total", self.total));
        rows
    }
}

fn bk_params(n: usize) -> Params {
    let m = ceil_sqrt(n).max(1);
    Params { n, m, d: n.div_ceil(m), ..Params::default() }
}

fn fallback_warning(algo: &str, e: &Error) -> String {
    format!("warning: {algo}: {e}; falling back to brent-kung")
}

struct Computed {
    h: Poly,
    params: Params,
    phases: Vec<(&'static str, Duration)>,
    generic: bool,
    warnings: Vec<String>,
}

fn relmat(inst: &Instance) -> Result<Computed> {
    let (f, a, g) = (&inst.f, &inst.a, &inst.g);
    let n = inst.n();
    if f.coeff(0) != 0 {
        let mut c = Composer::new(f, a)?;
        let h = c.compose(g)?;
        let (n, m, d, mu, delta) = c.params();
        return Ok(Computed {
            h,
            params: Params { n, m, d, mu, delta },
            phases: c.timings().phases.clone(),
            generic: true,
            warnings: Vec::new(),
        });
    }
    let (h, t) = univariate_compose_timed(g, a, f)?;
    Ok(Computed { h, params: Params { n, ..Params::default() }, phases: t.phases, generic: true, warnings: Vec::new() })
}

pub fn run_compose(algo: ComposeAlgo, inst: &Instance, verify: bool) -> Result<Outcome> {
    let (f, a, g) = (&inst.f, &inst.a, &inst.g);
    let n = inst.n();
    let start = Instant::now();
    let single = |h: Poly, params: Params, t: Duration| Computed {
        h,
        params,
        phases: vec![("composition", t)],
        generic: true,
        warnings: Vec::new(),
    };
    let fallback = |algo: &str, e: &Error| -> Result<Computed> {
        let t = Instant::now();
        let h = brent_kung_compose(g, a, f)?;
        let mut c = single(h, bk_params(n), t.elapsed());
        c.generic = false;
        c.warnings.push(fallback_warning(algo, e));
        Ok(c)
    };
    let c = match algo {
        ComposeAlgo::Horner => single(horner_compose(g, a, f)?, Params { n, ..Params::default() }, start.elapsed()),
        ComposeAlgo::BrentKung => single(brent_kung_compose(g, a, f)?, bk_params(n), start.elapsed()),
        ComposeAlgo::Relmat => match relmat(inst) {
            Err(e @ Error::NonGeneric(_)) => fallback("relmat", &e)?,
            r => r?,
        },
        ComposeAlgo::Charpoly => match compose_via_charpoly(g, a, f) {
            Ok(h) => single(h, Params { n, ..Params::default() }, start.elapsed()),
            Err(e @ Error::MinimalPolynomialDefect) => fallback("charpoly", &e)?,
            Err(e) => return Err(e),
        },
    };
    let total = start.elapsed();
    let verified = if verify { Some(verify_compose(inst, c.h.coeffs())?) } else { None };
    Ok(Outcome {
        algo: algo_name(algo),
        params: c.params,
        phases: c.phases,
        total,
        generic: c.generic,
        verified,
        output: c.h.into_coeffs(),
        warnings: c.warnings,
    })
}

/// Compares against Horner's rule.
pub fn verify_compose(inst: &Instance, output: &[FieldElement]) -> Result<bool> {
    Ok(horner_compose(&inst.g, &inst.a, &inst.f)?.coeffs() == output)
}

/// `y`-bound `mu^3`-compatible block size for `G` of `y`-bound `d`.
pub fn default_mu(d: usize, n: usize) -> usize {
    ceil_cbrt(d).clamp(1, n.max(1))
}

pub fn run_bivariate(
    algo: BivAlgo,
    f: &Poly,
    a: &Poly,
    g: &BiPoly,
    mu: Option<usize>,
    verify: bool,
) -> Result<Outcome> {
    let n = f.degree().unwrap_or(0);
    let d = g.ybound();
    let start = Instant::now();
    let (h, params, phases, generic) = match algo {
        BivAlgo::Nz => {
            let h = nz_bivariate_compose(g, a, f)?;
            let k = ceil_sqrt(d).max(1);
            (h, Params { n, m: k, d, ..Params::default() }, vec![("composition", start.elapsed())], true)
        }
        BivAlgo::Kronecker => {
            let mu = mu.unwrap_or_else(|| default_mu(d, n));
            let tables = powers_ab(f, a, mu)?;
            let t1 = start.elapsed();
            let h = bivariate_compose(g, f, a, &tables)?;
            let params = Params { n, m: 0, d, mu, delta: tables.delta() };
            (h, params, vec![("powers_ab", t1), ("composition", start.elapsed() - t1)], tables.basis.generic)
        }
    };
    let total = start.elapsed();
    let verified = if verify { Some(g.eval_y(a, f)? == h) } else { None };
    Ok(Outcome {
        algo: algo_name(algo),
        params,
        phases,
        total,
        generic,
        verified,
        output: h.into_coeffs(),
        warnings: Vec::new(),
    })
}

pub fn naive_eval(g: &BiPoly, x: FieldElement, y: FieldElement) -> FieldElement {
    let fld = g.field();
    (0..g.ybound()).rev().fold(0, |acc, j| fld.add(fld.mul(acc, y), g.y_coeff(j).eval(x)))
}

pub fn run_mpe(g: &BiPoly, points: &[(FieldElement, FieldElement)], verify: bool) -> Result<Outcome> {
    let n = points.len();
    let d = g.ybound();
    let mu = default_mu(d, n);
    let start = Instant::now();
    let mut warnings = Vec::new();
    let (values, generic) = match multipoint_eval_bivariate(g, points) {
        Ok(v) => (v, true),
        Err(e @ Error::NonGeneric(_)) => {
            warnings.push(format!("warning: mpe: {e}; falling back to per-point evaluation"));
            (points.iter().map(|&(x, y)| naive_eval(g, x, y)).collect(), false)
        }
        Err(e) => return Err(e),
    };
    let total = start.elapsed();
    let verified = if verify {
        Some(points.iter().zip(&values).all(|(&(x, y), &v)| naive_eval(g, x, y) == v))
    } else {
        None
    };
    Ok(Outcome {
        algo: "mpe".into(),
        params: Params { n, d, mu, ..Params::default() },
        phases: vec![("composition", total)],
        total,
        generic,
        verified,
        output: values,
        warnings,
    })
}

/// Warns when the field is small for the genericity arguments.
pub fn small_field_warning(field: &Field, n: usize) -> Option<String> {
    let need = 4u128 * (n as u128) * (n as u128);
    (u128::from(field.modulus()) < need).then(|| {
        format!("warning: p = {} < 4n^2 = {need}; generic behaviour is not guaranteed", field.modulus())
    })
}
