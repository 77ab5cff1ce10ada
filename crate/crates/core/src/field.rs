//! Prime fields `F_p` for a runtime word-sized odd prime `p`, plus the
//! radix-2 number-theoretic transform used by polynomial multiplication.
//!
//! Elements are plain `u64` residues kept canonical in `[0, p)`. All the
//! arithmetic goes through a [`Field`] value, which is `Copy` and carries the
//! modulus together with the data needed for transforms.

use crate::error::{Error, Result};

/// An element of a prime field, always reduced into `[0, p)`.
pub type FieldElement = u64;

/// 2^64 - 2^32 + 1.
pub const GOLDILOCKS: u64 = 0xffff_ffff_0000_0001;
/// 119 * 2^23 + 1.
pub const P998: u64 = 998_244_353;

const MR_BASES: [u64; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Miller-Rabin with the first twenty primes as witnesses (deterministic for
/// every `u64`).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// Brent's variant of Pollard rho; `n` is odd composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn prime_factors(mut n: u64, out: &mut Vec<u64>) {
    let mut q = 2u64;
    while q < 1 << 16 && q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(r) = stack.pop() {
        if r == 1 {
            continue;
        }
        if is_prime(r) {
            if !out.contains(&r) {
                out.push(r);
            }
            continue;
        }
        let d = pollard_rho(r);
        stack.push(d);
        stack.push(r / d);
    }
    out.sort_unstable();
}

/// A prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u64,
    two_adicity: u32,
    generator: u64,
    reducer: Reducer,
}

/// How products are reduced: Barrett for `p < 2^32`, the special form of the
/// Goldilocks prime, or a plain 128-bit remainder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Reducer {
    Barrett(u64),
    Goldilocks,
    Generic,
}

const EPS: u64 = 0xffff_ffff;

#[inline]
fn reduce_goldilocks(x: u128) -> u64 {
    let lo = x as u64;
    let hi = (x >> 64) as u64;
    let (hh, hl) = (hi >> 32, hi & EPS);
    // 2^96 = -1 and 2^64 = 2^32 - 1
    let (mut t0, borrow) = lo.overflowing_sub(hh);
    if borrow {
        t0 = t0.wrapping_sub(EPS);
    }
    let (mut r, carry) = t0.overflowing_add(hl * EPS);
    if carry {
        r = r.wrapping_add(EPS);
    }
    if r >= GOLDILOCKS {
        r - GOLDILOCKS
    } else {
        r
    }
}

impl Field {
    /// Builds the field after checking that `p` is an odd prime and finding
    /// the smallest primitive root.
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || p.is_multiple_of(2) {
            return Err(Error::EvenModulus(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut factors = Vec::new();
        prime_factors(p - 1, &mut factors);
        let generator = (2..p)
            .find(|&g| factors.iter().all(|&q| powmod(g, (p - 1) / q, p) != 1))
            .expect("a prime field has a primitive root");
        let reducer = if p < 1 << 32 {
            Reducer::Barrett(u64::MAX / p)
        } else if p == GOLDILOCKS {
            Reducer::Goldilocks
        } else {
            Reducer::Generic
        };
        Ok(Field {
            p,
            two_adicity: (p - 1).trailing_zeros(),
            generator,
            reducer,
        })
    }

    pub fn goldilocks() -> Self {
        Field::new(GOLDILOCKS).expect("Goldilocks prime")
    }

    pub fn p998() -> Self {
        Field::new(P998).expect("998244353 is prime")
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn two_adicity(&self) -> u32 {
        self.two_adicity
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn elem(&self, v: u64) -> FieldElement {
        v % self.p
    }

    /// Maps a signed integer into the field.
    pub fn from_i64(&self, v: i64) -> FieldElement {
        if v >= 0 {
            (v as u64) % self.p
        } else {
            self.neg(v.unsigned_abs() % self.p)
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (s, carry) = a.overflowing_add(b);
        if carry || s >= self.p {
            s.wrapping_sub(self.p)
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(b).wrapping_add(self.p)
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match self.reducer {
            Reducer::Barrett(m) => {
                let x = a * b;
                let q = ((x as u128 * m as u128) >> 64) as u64;
                let r = x - q * self.p;
                if r >= self.p {
                    r - self.p
                } else {
                    r
                }
            }
            Reducer::Goldilocks => reduce_goldilocks(a as u128 * b as u128),
            Reducer::Generic => mulmod(a, b, self.p),
        }
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let (mut b, mut r) = (a % self.p, 1 % self.p);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// A primitive `size`-th root of unity, `size` a power of two.
    pub fn root_of_unity(&self, size: usize) -> Result<FieldElement> {
        if !size.is_power_of_two() || size.trailing_zeros() > self.two_adicity {
            return Err(Error::UnsupportedTransformSize(size));
        }
        Ok(self.pow(self.generator, (self.p - 1) / size as u64))
    }

    pub fn supports_ntt(&self, size: usize) -> bool {
        size.is_power_of_two() && size.trailing_zeros() <= self.two_adicity
    }

    /// In-place transform. Forward maps `v` to `(v(w^0), v(w^1), ...)` for the
    /// root `w` returned by [`Field::root_of_unity`]; inverse undoes it.
    pub fn ntt_in_place(&self, v: &mut [FieldElement], inverse: bool) -> Result<()> {
        let n = v.len();
        if !self.supports_ntt(n) {
            return Err(Error::UnsupportedTransformSize(n));
        }
        if n == 1 {
            return Ok(());
        }
        let tables = twiddles(self, n, inverse)?;
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                v.swap(i, j);
            }
        }
        let p = self.p;
        let shoup = self.p < 1 << 62;
        let mut half = 1;
        while half < n {
            let (tw, tws) = (&tables.0[half..2 * half], &tables.1[half..2 * half]);
            for chunk in v.chunks_exact_mut(2 * half) {
                let (lo, hi) = chunk.split_at_mut(half);
                for ((u, x), (&w, &ws)) in lo.iter_mut().zip(hi.iter_mut()).zip(tw.iter().zip(tws)) {
                    let t = if shoup {
                        let q = ((*x as u128 * ws as u128) >> 64) as u64;
                        let r = x.wrapping_mul(w).wrapping_sub(q.wrapping_mul(p));
                        if r >= p { r - p } else { r }
                    } else {
                        self.mul(*x, w)
                    };
                    let a = *u;
                    *u = self.add(a, t);
                    *x = self.sub(a, t);
                }
            }
            half <<= 1;
        }
        if inverse {
            let ninv = self.inv(n as u64 % self.p)?;
            for x in v.iter_mut() {
                *x = self.mul(*x, ninv);
            }
        }
        Ok(())
    }

    /// Out-of-place transform of exactly `size` coefficients.
    pub fn ntt(&self, coeffs: &[FieldElement], inverse: bool) -> Result<Vec<FieldElement>> {
        let mut v = coeffs.to_vec();
        self.ntt_in_place(&mut v, inverse)?;
        Ok(v)
    }
}

type Twiddles = std::rc::Rc<(Vec<u64>, Vec<u64>)>;
/// `(p, size, inverse)`.
type TwiddleKey = (u64, usize, bool);

thread_local! {
    static TWIDDLES: std::cell::RefCell<Vec<(TwiddleKey, Twiddles)>> = const { std::cell::RefCell::new(Vec::new()) };
}

/// Per-stage twiddles: entries `h..2h` hold `w_(2h)^k` for `k < h`, with
/// their Shoup companions `floor(w 2^64 / p)`. Cached per thread.
fn twiddles(f: &Field, n: usize, inverse: bool) -> Result<Twiddles> {
    let key = (f.p, n, inverse);
    if let Some(t) = TWIDDLES.with(|c| c.borrow().iter().find(|e| e.0 == key).map(|e| e.1.clone())) {
        return Ok(t);
    }
    let mut root = f.root_of_unity(n)?;
    if inverse {
        root = f.inv(root)?;
    }
    let mut tw = vec![0u64; n];
    let mut half = n / 2;
    let mut w = root;
    while half >= 1 {
        let mut t = 1u64;
        for k in 0..half {
            tw[half + k] = t;
            t = f.mul(t, w);
        }
        w = f.mul(w, w);
        half /= 2;
    }
    let tws: Vec<u64> = if f.p < 1 << 62 {
        tw.iter().map(|&w| (((w as u128) << 64) / f.p as u128) as u64).collect()
    } else {
        vec![0; n]
    };
    let t: Twiddles = std::rc::Rc::new((tw, tws));
    TWIDDLES.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= 64 {
            c.remove(0);
        }
        c.push((key, t.clone()));
    });
    Ok(t)
}
