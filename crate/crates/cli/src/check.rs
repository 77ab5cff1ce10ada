use relcomp::bipoly::BiPoly;
use relcomp::compose::ceil_sqrt;
use relcomp::duality::{charpoly, check_transposition_identity, inverse_compose, CharpolyVia};
use relcomp::error::{Error, Result};
use relcomp::instance::{Instance, SplitMix64};
use relcomp::polymat::pm_det;
use relcomp::relations::nmu_basis;

use crate::run::{run_bivariate, run_compose, run_mpe, BivAlgo, ComposeAlgo};

/// Properties exercised by `check`, in report order.
pub const PROPERTIES: [&str; 9] = [
    "relmat=horner",
    "brent-kung=horner",
    "charpoly=horner",
    "kronecker=nz=naive",
    "transposition",
    "charpoly-basis=berkowitz",
    "degree-law",
    "mpe=naive",
    "inverse-compose",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    NonGeneric,
    /// Outside the size range the property is run at.
    Skipped,
    Fail,
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn refusal(r: Result<Status>) -> Result<Status> {
    match r {
        Err(Error::NonGeneric(_)) | Err(Error::MinimalPolynomialDefect) => Ok(Status::NonGeneric),
        r => r,
    }
}

/// Runs one property on the instance drawn from `(p, n, seed)`.
pub fn check_one(prop: &str, p: u64, n: usize, seed: u64) -> Result<Status> {
    let inst = Instance::random(p, n, seed)?;
    let (f, a) = (&inst.f, &inst.a);
    let mut rng = SplitMix64::new(seed.wrapping_add(1));
    refusal((|| match prop {
        "relmat=horner" => {
            let o = run_compose(ComposeAlgo::Relmat, &inst, true)?;
            Ok(if !o.generic { Status::NonGeneric } else { status(o.verified == Some(true)) })
        }
        "brent-kung=horner" => Ok(status(run_compose(ComposeAlgo::BrentKung, &inst, true)?.verified == Some(true))),
        "charpoly=horner" if n <= 20 => {
            let o = run_compose(ComposeAlgo::Charpoly, &inst, true)?;
            Ok(if !o.generic { Status::NonGeneric } else { status(o.verified == Some(true)) })
        }
        "kronecker=nz=naive" => {
            let g: BiPoly = rng.bipoly(inst.field, n, n.min(27));
            let k = run_bivariate(BivAlgo::Kronecker, f, a, &g, None, true)?;
            let z = run_bivariate(BivAlgo::Nz, f, a, &g, None, true)?;
            Ok(status(k.verified == Some(true) && z.verified == Some(true) && k.output == z.output))
        }
        "transposition" if n <= 32 => {
            let m = 1 + (seed as usize) % n;
            let r = check_transposition_identity(f, a, m, 3)?;
            Ok(status(r.transposition_holds && r.symmetrizer_holds && r.q_invertible && r.p_invertible))
        }
        "charpoly-basis=berkowitz" if n <= 24 => {
            let b = charpoly(a, f, CharpolyVia::Berkowitz)?;
            Ok(status(charpoly(a, f, CharpolyVia::Basis(None))? == b))
        }
        "degree-law" => {
            let basis = nmu_basis(f, a, ceil_sqrt(n).max(1))?;
            let det_ok = pm_det(&basis.matrix)?.make_monic() == *f;
            Ok(if !det_ok { Status::Fail } else if basis.generic { Status::Pass } else { Status::NonGeneric })
        }
        "mpe=naive" => {
            let g = rng.bipoly(inst.field, n, n);
            let pts = rng.points(&inst.field, n)?;
            let o = run_mpe(&g, &pts, true)?;
            Ok(if !o.generic { Status::NonGeneric } else { status(o.verified == Some(true)) })
        }
        "inverse-compose" if n <= 20 => {
            let h = rng.poly(inst.field, n);
            let gi = inverse_compose(&h, a, f)?;
            Ok(status(relcomp::compose::horner_compose(&gi, a, f)? == h))
        }
        p if PROPERTIES.contains(&p) => Ok(Status::Skipped),
        p => Err(Error::BadParameters(format!("unknown property {p}"))),
    })())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub pass: usize,
    pub nongeneric: usize,
    pub skipped: usize,
    pub fail: usize,
}

impl Tally {
    pub fn add(&mut self, s: Status) {
        match s {
            Status::Pass => self.pass += 1,
            Status::NonGeneric => self.nongeneric += 1,
            Status::Skipped => self.skipped += 1,
            Status::Fail => self.fail += 1,
        }
    }
}
