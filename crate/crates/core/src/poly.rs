//! Dense univariate polynomials over a prime field.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// Below this length (of the shorter operand) products are schoolbook.
pub const MUL_NTT_THRESHOLD: usize = 32;
/// Below this quotient length Euclidean division is done by long division.
pub const DIV_NEWTON_THRESHOLD: usize = 64;

/// Coefficients low-to-high with no trailing zeros; the zero polynomial has
/// no coefficients and degree `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

fn trim(v: &mut Vec<FieldElement>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn schoolbook(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    out
}

/// Product of two coefficient slices (low-to-high). The output has length
/// `a.len() + b.len() - 1`, or is empty when either input is.
pub fn mul_coeffs(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    if a.len().min(b.len()) < MUL_NTT_THRESHOLD || !field.supports_ntt(size) {
        return schoolbook(field, a, b);
    }
    let mut fa = a.to_vec();
    fa.resize(size, 0);
    let mut fb = b.to_vec();
    fb.resize(size, 0);
    field.ntt_in_place(&mut fa, false).expect("size checked");
    field.ntt_in_place(&mut fb, false).expect("size checked");
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = field.mul(*x, *y);
    }
    field.ntt_in_place(&mut fa, true).expect("size checked");
    fa.truncate(out_len);
    fa
}

thread_local! {
    static REV_INV: std::cell::RefCell<Vec<(Poly, Poly)>> = const { std::cell::RefCell::new(Vec::new()) };
}

/// `rev(divisor)^-1 mod x^k`, remembering the last few divisors per thread so
/// repeated reductions by one modulus share the Newton iteration.
fn reversed_inverse(divisor: &Poly, k: usize) -> Result<Poly> {
    let hit = REV_INV.with(|c| {
        c.borrow().iter().find(|(d, inv)| d == divisor && inv.len() >= k).map(|(_, inv)| inv.truncate(k))
    });
    if let Some(inv) = hit {
        return Ok(inv);
    }
    let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
    // the quotient of a product of two remainders has length at most dd
    let want = k.max(dd);
    let inv = divisor.reverse(dd)?.series_inv(want)?;
    REV_INV.with(|c| {
        let mut c = c.borrow_mut();
        c.retain(|(d, _)| d != divisor);
        if c.len() >= 8 {
            c.remove(0);
        }
        c.push((divisor.clone(), inv.clone()));
    });
    Ok(inv.truncate(k))
}

impl Poly {
    /// Builds a polynomial, reducing coefficients into the field and trimming.
    pub fn new(field: Field, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| field.elem(c)).collect();
        trim(&mut coeffs);
        Poly { field, coeffs }
    }

    /// Like [`Poly::new`] for coefficients already known to be reduced.
    pub(crate) fn from_reduced(field: Field, mut coeffs: Vec<FieldElement>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < field.modulus()));
        trim(&mut coeffs);
        Poly { field, coeffs }
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Self {
        Self::from_reduced(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: Field) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: Field, c: u64) -> Self {
        Self::new(field, vec![c])
    }

    pub fn x(field: Field) -> Self {
        Self::monomial(field, 1, 1)
    }

    /// `c * x^k`.
    pub fn monomial(field: Field, c: u64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::new(field, v)
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    /// `None` is the degree of the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of stored coefficients (`degree + 1`, or 0).
    #[inline]
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Leading coefficient; 0 for the zero polynomial.
    pub fn lc(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            Err(Error::FieldMismatch)
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let f = self.field;
        let n = self.len().max(other.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Ok(Poly::from_reduced(f, v))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let f = self.field;
        let n = self.len().max(other.len());
        let v = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Ok(Poly::from_reduced(f, v))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(Poly::from_reduced(
            self.field,
            mul_coeffs(&self.field, &self.coeffs, &other.coeffs),
        ))
    }

    pub fn scale(&self, c: FieldElement) -> Poly {
        let f = self.field;
        Poly::from_reduced(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        Poly { field: self.field, coeffs: v }
    }

    /// Reduction modulo `x^k`.
    pub fn truncate(&self, k: usize) -> Poly {
        let v = self.coeffs[..self.len().min(k)].to_vec();
        Poly::from_reduced(self.field, v)
    }

    /// Coefficients `lo .. lo + len` as a polynomial (missing ones are zero).
    pub fn range(&self, lo: usize, len: usize) -> Poly {
        let v = (lo..lo + len).map(|i| self.coeff(i)).collect();
        Poly::from_reduced(self.field, v)
    }

    /// `[g]_u^k = g_u + g_{u+1} x + ... + g_{u+k} x^k`, i.e. `k + 1` coefficients
    /// starting at index `start`.
    pub fn slice(&self, start: usize, k: usize) -> Poly {
        self.range(start, k + 1)
    }

    /// `x^k u(1/x)`; requires `deg u <= k`.
    pub fn reverse(&self, k: usize) -> Result<Poly> {
        if let Some(d) = self.degree() {
            if d > k {
                return Err(Error::DegreeOverflow { degree: d, bound: k });
            }
        }
        let v = (0..=k).map(|j| self.coeff(k - j)).collect();
        Ok(Poly::from_reduced(self.field, v))
    }

    pub fn make_monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lc()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.elem(i as u64)))
            .collect();
        Poly::from_reduced(f, v)
    }

    /// Power series inverse modulo `x^k` by Newton iteration.
    pub fn series_inv(&self, k: usize) -> Result<Poly> {
        let f = self.field;
        let c0 = self.coeff(0);
        if c0 == 0 {
            return Err(Error::NotAUnit);
        }
        if k == 0 {
            return Ok(Poly::zero(f));
        }
        let mut g = Poly::constant(f, f.inv(c0)?);
        let mut prec = 1;
        while prec < k {
            prec = (2 * prec).min(k);
            // g <- g (2 - u g) mod x^prec
            let ug = (&self.truncate(prec) * &g).truncate(prec);
            let two_minus = &Poly::constant(f, 2) - &ug;
            g = (&g * &two_minus).truncate(prec);
        }
        Ok(g)
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check(divisor)?;
        let f = self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let Some(du) = self.degree() else {
            return Ok((Poly::zero(f), Poly::zero(f)));
        };
        if du < dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let qlen = du - dd + 1;
        if qlen < DIV_NEWTON_THRESHOLD || dd < MUL_NTT_THRESHOLD {
            let inv_lc = f.inv(divisor.lc())?;
            let mut r = self.coeffs.clone();
            let mut q = vec![0; qlen];
            for i in (0..qlen).rev() {
                let c = f.mul(r[i + dd], inv_lc);
                q[i] = c;
                if c != 0 {
                    for (j, &dj) in divisor.coeffs.iter().enumerate() {
                        r[i + j] = f.sub(r[i + j], f.mul(c, dj));
                    }
                }
            }
            r.truncate(dd);
            return Ok((Poly::from_reduced(f, q), Poly::from_reduced(f, r)));
        }
        let rev_u = self.reverse(du)?.truncate(qlen);
        let inv = reversed_inverse(divisor, qlen)?;
        let q = (&rev_u * &inv).truncate(qlen).reverse(qlen - 1)?;
        let r = (self - &(&q * divisor)).truncate(dd);
        Ok((q, r))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        if let (Some(du), Some(dd)) = (self.degree(), divisor.degree()) {
            if du < dd {
                self.check(divisor)?;
                return Ok(self.clone());
            }
        }
        Ok(self.divrem(divisor)?.1)
    }

    /// `self * other rem modulus`.
    pub fn mulmod(&self, other: &Poly, modulus: &Poly) -> Result<Poly> {
        self.try_mul(other)?.rem(modulus)
    }

    /// `self^e rem modulus` by square-and-multiply.
    pub fn powmod(&self, mut e: u64, modulus: &Poly) -> Result<Poly> {
        let mut base = self.rem(modulus)?;
        let mut acc = Poly::one(self.field).rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, modulus)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, modulus)?;
            }
        }
        Ok(acc)
    }

    /// Extended Euclid: `(g, s, t)` with `s*self + t*other = g`, `g` monic
    /// (or zero when both inputs are zero).
    pub fn xgcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.check(other)?;
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let inv = f.inv(r0.lc())?;
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        Ok(self.xgcd(other)?.0)
    }

    /// Inverse of `self` modulo `modulus`.
    pub fn inv_mod(&self, modulus: &Poly) -> Result<Poly> {
        if modulus.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let a = self.rem(modulus)?;
        let (g, s, _) = a.xgcd(modulus)?;
        if g.degree() != Some(0) {
            return Err(Error::NotInvertibleModF { gcd: g.into_coeffs() });
        }
        s.rem(modulus)
    }

    /// Power of `x` dividing `self` (0 for the zero polynomial).
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|&&c| c == 0).count()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field;
        Poly::from_reduced(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}
