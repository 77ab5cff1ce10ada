//! Reproducible problem instances: a splitmix64 stream and a plain-text
//! file format.
//!
//! Field elements are drawn by rejection: a 64-bit word `w` is accepted when
//! `w < p * floor((2^64 - 1) / p)` and mapped to `w mod p`. A random instance of
//! size `n` draws, in order, `f_0 .. f_(n-1)` (with `f_0` redrawn until
//! nonzero; `f_n = 1`), then `n` coefficients of `a`, then `n` of `g`.
//!
//! The file format is UTF-8 text with one `key=value` per line, keys `p`,
//! `f`, `a`, `g`, values as comma-separated decimal coefficients from low to
//! high degree. Blank lines and lines starting with `#` are skipped.

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::Poly;

/// Sebastiano Vigna's splitmix64 generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` by rejection sampling.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let limit = (u64::MAX / bound) * bound;
        loop {
            let w = self.next_u64();
            // u64::MAX itself is excluded along with the rest of the tail
            if w < limit {
                return w % bound;
            }
        }
    }

    pub fn element(&mut self, field: &Field) -> FieldElement {
        self.below(field.modulus())
    }

    pub fn nonzero(&mut self, field: &Field) -> FieldElement {
        loop {
            let c = self.element(field);
            if c != 0 {
                return c;
            }
        }
    }

    pub fn poly(&mut self, field: Field, len: usize) -> Poly {
        Poly::new(field, (0..len).map(|_| self.element(&field)).collect())
    }

    /// Monic of degree `n` with nonzero constant term.
    pub fn modulus(&mut self, field: Field, n: usize) -> Poly {
        let mut c = Vec::with_capacity(n + 1);
        if n > 0 {
            c.push(self.nonzero(&field));
        }
        c.extend((1..n).map(|_| self.element(&field)));
        c.push(1);
        Poly::new(field, c)
    }

    /// Coefficients drawn `y`-major: all of `y^0`, then `y^1`, ...
    pub fn bipoly(&mut self, field: Field, xbound: usize, ybound: usize) -> BiPoly {
        let mut g = BiPoly::zero(field, xbound, ybound);
        for j in 0..ybound {
            for i in 0..xbound {
                g.set(i, j, self.element(&field));
            }
        }
        g
    }

    /// `k` points with pairwise distinct abscissae.
    pub fn points(&mut self, field: &Field, k: usize) -> Result<Vec<(FieldElement, FieldElement)>> {
        if k as u64 > field.modulus() {
            return Err(Error::SmallField { needed: k });
        }
        let mut seen = std::collections::HashSet::with_capacity(k);
        let mut out = Vec::with_capacity(k);
        while out.len() < k {
            let x = self.element(field);
            if seen.insert(x) {
                out.push((x, self.element(field)));
            }
        }
        Ok(out)
    }
}

/// A univariate composition instance `g(a) rem f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub field: Field,
    pub f: Poly,
    pub a: Poly,
    pub g: Poly,
}

impl Instance {
    pub fn random(p: u64, n: usize, seed: u64) -> Result<Self> {
        let field = Field::new(p)?;
        let mut rng = SplitMix64::new(seed);
        let f = rng.modulus(field, n);
        let a = rng.poly(field, n);
        let g = rng.poly(field, n);
        Ok(Instance { field, f, a, g })
    }

    pub fn n(&self) -> usize {
        self.f.degree().unwrap_or(0)
    }

    /// Parses the text format; `p`, `f` and `a` are required, `g` defaults to zero.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::BadParameters(msg);
        let mut p = None;
        let mut lists: [Option<Vec<u64>>; 3] = [None, None, None];
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| bad(format!("line {}: expected key=value", no + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let slot = match key {
                "p" => {
                    if p.is_some() {
                        return Err(bad(format!("line {}: duplicate key p", no + 1)));
                    }
                    p = Some(value.parse::<u64>().map_err(|e| bad(format!("line {}: p: {e}", no + 1)))?);
                    continue;
                }
                "f" => 0,
                "a" => 1,
                "g" => 2,
                other => return Err(bad(format!("line {}: unknown key {other:?}", no + 1))),
            };
            if lists[slot].is_some() {
                return Err(bad(format!("line {}: duplicate key {key}", no + 1)));
            }
            lists[slot] = Some(parse_coeffs(value).map_err(|e| bad(format!("line {}: {key}: {e}", no + 1)))?);
        }
        let p = p.ok_or_else(|| bad("missing p".into()))?;
        let field = Field::new(p)?;
        let [f, a, g] = lists;
        let mk = |name: &str, c: Option<Vec<u64>>| -> Result<Poly> {
            let c = c.ok_or_else(|| bad(format!("missing {name}")))?;
            if let Some(x) = c.iter().find(|&&x| x >= p) {
                return Err(bad(format!("{name}: coefficient {x} not reduced modulo {p}")));
            }
            Ok(Poly::new(field, c))
        };
        let f = mk("f", f)?;
        let a = mk("a", a)?;
        let g = mk("g", g.or(Some(Vec::new())))?;
        let n = f.degree().filter(|&n| n > 0).ok_or_else(|| bad("f must have positive degree".into()))?;
        if a.len() > n || g.len() > n {
            return Err(bad(format!("a and g must have degree below {n}")));
        }
        Ok(Instance { field, f, a, g })
    }

    pub fn to_text(&self) -> String {
        let join = |p: &Poly| p.coeffs().iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        format!("p={}\nf={}\na={}\ng={}\n", self.field.modulus(), join(&self.f), join(&self.a), join(&self.g))
    }
}

/// Comma-separated decimal coefficients; the empty string is the zero polynomial.
pub fn parse_coeffs(s: &str) -> std::result::Result<Vec<u64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_stream() {
        // published outputs for seed 1234567
        let mut r = SplitMix64::new(1234567);
        let want = [6457827717110365317u64, 3203168211198807973, 9817491932198370423, 4593380528125082431];
        for w in want {
            assert_eq!(r.next_u64(), w);
        }
    }

    #[test]
    fn rejection_sampling_in_range() {
        let mut r = SplitMix64::new(9);
        for bound in [1u64, 2, 3, 7, 998244353, u64::MAX] {
            for _ in 0..200 {
                assert!(r.below(bound) < bound);
            }
        }
        let mut counts = [0usize; 3];
        for _ in 0..3000 {
            counts[r.below(3) as usize] += 1;
        }
        assert!(counts.iter().all(|&c| c > 850), "{counts:?}");
    }

    #[test]
    fn random_instances_are_reproducible() {
        let i = Instance::random(998244353, 16, 1).unwrap();
        assert_eq!(i, Instance::random(998244353, 16, 1).unwrap());
        assert_ne!(i, Instance::random(998244353, 16, 2).unwrap());
        assert_eq!(i.n(), 16);
        assert_eq!(i.f.lc(), 1);
        assert_ne!(i.f.coeff(0), 0);
        assert!(i.a.len() <= 16 && i.g.len() <= 16);
        let pts = SplitMix64::new(3).points(&i.field, 50).unwrap();
        let xs: std::collections::HashSet<_> = pts.iter().map(|p| p.0).collect();
        assert_eq!(xs.len(), 50);
        assert!(SplitMix64::new(3).points(&Field::new(5).unwrap(), 6).is_err());
    }

    #[test]
    fn text_round_trip() {
        let i = Instance::random(7, 5, 4).unwrap();
        assert_eq!(Instance::parse(&i.to_text()).unwrap(), i);
        let j = Instance::parse("# x^2+1\np=7\nf=1,0,1\na=0,1\n\n").unwrap();
        assert_eq!(j.g, Poly::zero(j.field));
        assert_eq!(j.f, Poly::new(j.field, vec![1, 0, 1]));
    }

    #[test]
    fn text_rejections() {
        for bad in [
            "p=7\nf=1,0,1\na=0,1\nh=1",
            "p=7\nf=1,0,1",
            "f=1,0,1\na=1",
            "p=8\nf=1,0,1\na=1",
            "p=7\nf=1,0,9\na=1",
            "p=7\nf=1,0,1\na=1,2,3",
            "p=7\nf=1,0,1\na=1\na=2",
            "p=7\nf=1,x\na=1",
            "p=7\nf=3\na=1",
            "p=7\nf 1\na=1",
        ] {
            assert!(Instance::parse(bad).is_err(), "{bad:?}");
        }
    }
}
