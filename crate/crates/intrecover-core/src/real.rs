//! Scalar types for a configurable working precision.
//!
//! `f64` covers the double-precision regime. [`MultiFloat<K>`] stores a value as an
//! unevaluated sum of `K` nonoverlapping doubles and reaches roughly `16·K` decimal digits.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::{self, Debug, Write};
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use ethnum::I256;

/// Real scalar used by transforms, lattice construction and Gram–Schmidt.
pub trait Real:
    Copy
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// Significand bits carried.
    const BITS: u32;

    fn from_f64(x: f64) -> Self;
    fn from_i128(x: i128) -> Self;
    fn from_i256(x: I256) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn floor(self) -> Self;
    /// Rounds toward zero.
    fn trunc(self) -> Self;
    /// Rounds half away from zero.
    fn round(self) -> Self;
    /// Converts an integral value; `None` when out of range or not finite.
    fn to_i128(self) -> Option<i128>;
    fn is_finite(self) -> bool;
    fn pi() -> Self;
    /// `(cos θ, sin θ)` for `θ = 2π·num/den`.
    fn cos_sin_turns(num: u64, den: u64) -> (Self, Self);
    /// Parses `[-]digits[.digits][e[-]digits]`.
    fn parse_decimal(s: &str) -> Option<Self>;
    /// Formats with `digits` significant digits as `d.ddde±x`.
    fn to_scientific(self, digits: usize) -> String;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn from_i64(x: i64) -> Self {
        Self::from_i128(x as i128)
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

/// Rounds `x` to `digits` significant decimal digits.
pub fn round_to_digits<R: Real>(x: R, digits: usize) -> R {
    if x == R::zero() || !x.is_finite() {
        return x;
    }
    R::parse_decimal(&x.to_scientific(digits)).unwrap_or(x)
}

// Octant reduction shared by both implementations: returns the octant and the
// numerator/denominator of the residual angle in units of π/4.
fn octant(num: u64, den: u64) -> (u64, u128, u128) {
    let den = den as u128;
    let j = num as u128 % den;
    let o = (8 * j) / den;
    let r = (8 * j) % den;
    (o as u64, r, den)
}

fn place<R: Real>(o: u64, s: R, c: R, s2: R, c2: R) -> (R, R) {
    // (s, c) are sin/cos of t·π/4, (s2, c2) of (1−t)·π/4.
    match o {
        0 => (c, s),
        1 => (s2, c2),
        2 => (-s, c),
        3 => (-c2, s2),
        4 => (-c, -s),
        5 => (-s2, -c2),
        6 => (s, -c),
        _ => (c2, -s2),
    }
}

impl Real for f64 {
    const BITS: u32 = 53;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_i128(x: i128) -> Self {
        x as f64
    }
    fn from_i256(x: I256) -> Self {
        x.as_f64()
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn abs(self) -> Self {
        libm::fabs(self)
    }
    fn sqrt(self) -> Self {
        libm::sqrt(self)
    }
    fn floor(self) -> Self {
        libm::floor(self)
    }
    fn trunc(self) -> Self {
        libm::trunc(self)
    }
    fn round(self) -> Self {
        libm::round(self)
    }
    fn to_i128(self) -> Option<i128> {
        if self.is_finite() && libm::fabs(self) < 1.7e38 {
            Some(self as i128)
        } else {
            None
        }
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn pi() -> Self {
        core::f64::consts::PI
    }
    fn cos_sin_turns(num: u64, den: u64) -> (Self, Self) {
        let (o, r, den) = octant(num, den);
        let q = core::f64::consts::FRAC_PI_4;
        let t = q * (r as f64 / den as f64);
        let t2 = q * ((den - r) as f64 / den as f64);
        let (s, c) = (libm::sin(t), libm::cos(t));
        let (s2, c2) = (libm::sin(t2), libm::cos(t2));
        place(o, s, c, s2, c2)
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        let s = s.trim();
        if !valid_decimal(s) {
            return None;
        }
        s.parse::<f64>().ok()
    }
    fn to_scientific(self, digits: usize) -> String {
        let mut out = String::new();
        let _ = write!(out, "{:.*e}", digits.max(1) - 1, self);
        out
    }
}

fn valid_decimal(s: &str) -> bool {
    let body = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let mut seen_digit = false;
    let mut seen_dot = false;
    for ch in mant.chars() {
        match ch {
            '0'..='9' => seen_digit = true,
            '.' if !seen_dot => seen_dot = true,
            _ => return false,
        }
    }
    if !seen_digit {
        return false;
    }
    if let Some(e) = exp {
        let e = e.strip_prefix('-').or_else(|| e.strip_prefix('+')).unwrap_or(e);
        if e.is_empty() || !e.bytes().all(|b| b.is_ascii_digit()) || e.len() > 5 {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// error-free transformations

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let c = 134_217_729.0 * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

const CAP: usize = 72;

/// Sums `terms` exactly and keeps the `K` leading components.
fn renorm<const K: usize>(terms: &[f64]) -> [f64; K] {
    debug_assert!(terms.len() <= CAP);
    let mut e = [0.0f64; CAP];
    let mut n = 0usize;
    for &t in terms {
        if t == 0.0 {
            continue;
        }
        if !t.is_finite() {
            let mut out = [0.0; K];
            out[0] = terms.iter().sum();
            return out;
        }
        let mut q = t;
        let mut m = 0;
        for i in 0..n {
            let (s, err) = two_sum(q, e[i]);
            if err != 0.0 {
                e[m] = err;
                m += 1;
            }
            q = s;
        }
        if q != 0.0 {
            e[m] = q;
            m += 1;
        }
        n = m;
    }
    let mut out = [0.0; K];
    if n == 0 {
        return out;
    }
    // compress: top-down then bottom-up sweep
    let mut g = [0.0f64; CAP];
    let mut bottom = n - 1;
    let mut q = e[n - 1];
    for i in (0..n - 1).rev() {
        let (s, r) = fast_two_sum(q, e[i]);
        if r != 0.0 {
            g[bottom] = s;
            bottom -= 1;
            q = r;
        } else {
            q = s;
        }
    }
    g[bottom] = q;
    let mut h = [0.0f64; CAP];
    let mut top = 0;
    q = g[bottom];
    for &gi in &g[bottom + 1..n] {
        let (s, r) = fast_two_sum(gi, q);
        if r != 0.0 {
            h[top] = r;
            top += 1;
        }
        q = s;
    }
    h[top] = q;
    let len = top + 1;
    for (i, slot) in out.iter_mut().enumerate() {
        if i < len {
            *slot = h[len - 1 - i];
        }
    }
    out
}

/// Unevaluated sum of `K` doubles, leading component first.
#[derive(Clone, Copy)]
pub struct MultiFloat<const K: usize>(pub [f64; K]);

/// About 32 significant digits.
pub type Double2 = MultiFloat<2>;
/// About 48 significant digits.
pub type Double3 = MultiFloat<3>;
/// About 64 significant digits.
pub type Double4 = MultiFloat<4>;

impl<const K: usize> MultiFloat<K> {
    pub fn new(x: f64) -> Self {
        let mut c = [0.0; K];
        c[0] = x;
        MultiFloat(c)
    }

    pub fn hi(self) -> f64 {
        self.0[0]
    }

    fn mul_f64(self, b: f64) -> Self {
        let mut t = [0.0; CAP];
        for i in 0..K {
            let (p, e) = two_prod(self.0[i], b);
            t[2 * i] = p;
            t[2 * i + 1] = e;
        }
        MultiFloat(renorm(&t[..2 * K]))
    }

    fn scale_pow2(self, f: f64) -> Self {
        let mut c = self.0;
        for x in c.iter_mut() {
            *x *= f;
        }
        MultiFloat(c)
    }

    fn from_u128(x: u128) -> Self {
        let m = (1u128 << 53) - 1;
        let a = (x >> 106) as f64;
        let b = ((x >> 53) & m) as f64;
        let c = (x & m) as f64;
        MultiFloat(renorm(&[a * libm::ldexp(1.0, 106), b * libm::ldexp(1.0, 53), c]))
    }

    fn powi10(n: i32) -> Self {
        let mut result = Self::new(1.0);
        let mut base = Self::new(10.0);
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            e >>= 1;
        }
        if n < 0 {
            Self::new(1.0) / result
        } else {
            result
        }
    }

    fn sin_cos_small(t: Self) -> (Self, Self) {
        let tol = libm::ldexp(1.0, -(53 * K as i32) - 8);
        let t2 = t * t;
        let mut s = t;
        let mut term = t;
        let mut k = 1.0;
        loop {
            term = -(term * t2) / Self::new((2.0 * k) * (2.0 * k + 1.0));
            s += term;
            if libm::fabs(term.0[0]) < tol {
                break;
            }
            k += 1.0;
        }
        let mut c = Self::new(1.0);
        let mut term = Self::new(1.0);
        k = 1.0;
        loop {
            term = -(term * t2) / Self::new((2.0 * k - 1.0) * (2.0 * k));
            c += term;
            if libm::fabs(term.0[0]) < tol {
                break;
            }
            k += 1.0;
        }
        (s, c)
    }
}

impl<const K: usize> Debug for MultiFloat<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_scientific(16 * K))
    }
}

impl<const K: usize> PartialEq for MultiFloat<K> {
    fn eq(&self, other: &Self) -> bool {
        (*self - *other).0[0] == 0.0
    }
}

impl<const K: usize> PartialOrd for MultiFloat<K> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (*self - *other).0[0].partial_cmp(&0.0)
    }
}

impl<const K: usize> Add for MultiFloat<K> {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let mut t = [0.0; CAP];
        t[..K].copy_from_slice(&self.0);
        t[K..2 * K].copy_from_slice(&b.0);
        MultiFloat(renorm(&t[..2 * K]))
    }
}

impl<const K: usize> Neg for MultiFloat<K> {
    type Output = Self;
    fn neg(self) -> Self {
        let mut c = self.0;
        for x in c.iter_mut() {
            *x = -*x;
        }
        MultiFloat(c)
    }
}

impl<const K: usize> Sub for MultiFloat<K> {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl<const K: usize> Mul for MultiFloat<K> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let mut t = [0.0; CAP];
        let mut n = 0;
        for i in 0..K {
            for j in 0..K - i {
                let (p, e) = two_prod(self.0[i], b.0[j]);
                t[n] = p;
                t[n + 1] = e;
                n += 2;
            }
        }
        MultiFloat(renorm(&t[..n]))
    }
}

impl<const K: usize> Div for MultiFloat<K> {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let b0 = b.0[0];
        let mut q = [0.0; CAP];
        let mut r = self;
        for qi in q.iter_mut().take(K + 1) {
            let v = r.0[0] / b0;
            *qi = v;
            if v == 0.0 || !v.is_finite() {
                break;
            }
            r = r - b.mul_f64(v);
        }
        MultiFloat(renorm(&q[..K + 1]))
    }
}

impl<const K: usize> AddAssign for MultiFloat<K> {
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}
impl<const K: usize> SubAssign for MultiFloat<K> {
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}
impl<const K: usize> MulAssign for MultiFloat<K> {
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

const PI_DIGITS: &str = "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798";

impl<const K: usize> Real for MultiFloat<K> {
    const BITS: u32 = 53 * K as u32;

    fn from_f64(x: f64) -> Self {
        Self::new(x)
    }
    fn from_i128(x: i128) -> Self {
        let v = Self::from_u128(x.unsigned_abs());
        if x < 0 {
            -v
        } else {
            v
        }
    }
    fn from_i256(x: I256) -> Self {
        let (hi, lo) = x.into_words();
        let h = Self::from_i128(hi).scale_pow2(libm::ldexp(1.0, 128));
        h + Self::from_u128(lo as u128)
    }
    fn to_f64(self) -> f64 {
        let mut s = 0.0;
        for &c in self.0.iter().rev() {
            s += c;
        }
        s
    }
    fn abs(self) -> Self {
        if self.0[0] < 0.0 {
            -self
        } else {
            self
        }
    }
    fn sqrt(self) -> Self {
        if self.0[0] <= 0.0 {
            return Self::new(if self.0[0] == 0.0 { 0.0 } else { f64::NAN });
        }
        let mut x = Self::new(libm::sqrt(self.0[0]));
        let iters = match K {
            1 => 1,
            2 => 2,
            _ => 3,
        };
        for _ in 0..iters {
            x = x + (self - x * x) / x.scale_pow2(2.0);
        }
        x
    }
    fn floor(self) -> Self {
        let mut c = [0.0; K];
        for i in 0..K {
            c[i] = libm::floor(self.0[i]);
            if c[i] != self.0[i] {
                break;
            }
        }
        MultiFloat(renorm(&c))
    }
    fn trunc(self) -> Self {
        if self.0[0] < 0.0 {
            -((-self).floor())
        } else {
            self.floor()
        }
    }
    fn round(self) -> Self {
        let half = Self::new(0.5);
        if self.0[0] < 0.0 {
            -((-self + half).floor())
        } else {
            (self + half).floor()
        }
    }
    fn to_i128(self) -> Option<i128> {
        let mut acc: i128 = 0;
        for &c in &self.0 {
            if !c.is_finite() || libm::fabs(c) >= 1.7014118346046923e38 {
                return None;
            }
            acc = acc.checked_add(c as i128)?;
        }
        Some(acc)
    }
    fn is_finite(self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
    fn pi() -> Self {
        Self::parse_decimal(PI_DIGITS).expect("constant parses")
    }
    fn cos_sin_turns(num: u64, den: u64) -> (Self, Self) {
        let (o, r, den) = octant(num, den);
        let q = Self::pi().scale_pow2(0.25);
        let d = Self::from_i128(den as i128);
        let t = q * Self::from_i128(r as i128) / d;
        let t2 = q * Self::from_i128((den - r) as i128) / d;
        let (s, c) = Self::sin_cos_small(t);
        let (s2, c2) = Self::sin_cos_small(t2);
        place(o, s, c, s2, c2)
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        let s = s.trim();
        if !valid_decimal(s) {
            return None;
        }
        let (neg, body) = match s.as_bytes()[0] {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let (mant, exp) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
            None => (body, 0),
        };
        let mut digits: Vec<u8> = Vec::with_capacity(mant.len());
        let mut frac = 0i32;
        let mut after_dot = false;
        for b in mant.bytes() {
            if b == b'.' {
                after_dot = true;
            } else {
                if after_dot {
                    frac += 1;
                }
                digits.push(b - b'0');
            }
        }
        let first = digits.iter().position(|&d| d != 0);
        let Some(first) = first else {
            return Some(Self::new(if neg { -0.0 } else { 0.0 }));
        };
        let digits = &digits[first..];
        let mut acc = Self::new(0.0);
        for chunk in digits.chunks(15) {
            let mut v = 0u64;
            for &d in chunk {
                v = v * 10 + d as u64;
            }
            acc = acc.mul_f64(libm::pow(10.0, chunk.len() as f64)) + Self::new(v as f64);
        }
        let e10 = exp - frac;
        let v = if e10 >= 0 {
            acc * Self::powi10(e10)
        } else {
            acc / Self::powi10(-e10)
        };
        Some(if neg { -v } else { v })
    }
    fn to_scientific(self, digits: usize) -> String {
        let n = digits.max(1);
        let mut out = String::new();
        if !self.is_finite() {
            let _ = write!(out, "{}", self.0[0]);
            return out;
        }
        if self.0[0] == 0.0 {
            let _ = write!(out, "{:.*e}", n - 1, 0.0f64);
            return out;
        }
        let neg = self.0[0] < 0.0;
        let mut y = self.abs();
        let mut e = libm::floor(libm::log10(y.0[0])) as i32;
        y = if e >= 0 {
            y / Self::powi10(e)
        } else {
            y * Self::powi10(-e)
        };
        let ten = Self::new(10.0);
        while y >= ten {
            y = y / ten;
            e += 1;
        }
        while y < Self::new(1.0) {
            y = y * ten;
            e -= 1;
        }
        let mut ds: Vec<u8> = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            let d = libm::floor(y.0[0]).clamp(0.0, 9.0);
            let d = if y < Self::new(d) { d - 1.0 } else { d };
            let d = d.clamp(0.0, 9.0);
            ds.push(d as u8);
            y = (y - Self::new(d)).mul_f64(10.0);
        }
        let round_up = ds[n] >= 5;
        ds.truncate(n);
        if round_up {
            let mut i = n;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.truncate(n);
                    e += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
        if neg {
            out.push('-');
        }
        out.push((b'0' + ds[0]) as char);
        if n > 1 {
            out.push('.');
            for &d in &ds[1..] {
                out.push((b'0' + d) as char);
            }
        }
        let _ = write!(out, "e{}", e);
        out
    }
}

/// Complex number over a [`Real`] scalar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Complex<R> {
    pub fn new(re: R, im: R) -> Self {
        Complex { re, im }
    }

    pub fn zero() -> Self {
        Complex::new(R::zero(), R::zero())
    }

    pub fn from_real(re: R) -> Self {
        Complex::new(re, R::zero())
    }

    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    pub fn scale(self, s: R) -> Self {
        Complex::new(self.re * s, self.im * s)
    }

    pub fn norm_sqr(self) -> R {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> R {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// `e^{−2πi·num/den}`.
    pub fn root(num: u64, den: u64) -> Self {
        let (c, s) = R::cos_sin_turns(num, den);
        Complex::new(c, -s)
    }
}

impl<R: Real> Add for Complex<R> {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        Complex::new(self.re + b.re, self.im + b.im)
    }
}

impl<R: Real> Sub for Complex<R> {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        Complex::new(self.re - b.re, self.im - b.im)
    }
}

impl<R: Real> Mul for Complex<R> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        Complex::new(
            self.re * b.re - self.im * b.im,
            self.re * b.im + self.im * b.re,
        )
    }
}

impl<R: Real> Neg for Complex<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Complex::new(-self.re, -self.im)
    }
}

impl<R: Real> AddAssign for Complex<R> {
    fn add_assign(&mut self, b: Self) {
        self.re += b.re;
        self.im += b.im;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI_60: &str = "3.14159265358979323846264338327950288419716939937510582097494";

    #[test]
    fn pi_digits_survive_round_trip() {
        let p = Double4::pi();
        let s = p.to_scientific(60);
        assert_eq!(&s[..61], &PI_60[..61]);
        let p2 = Double2::pi().to_scientific(31);
        assert_eq!(&p2[..32], &PI_60[..32]);
    }

    #[test]
    fn third_times_three() {
        let third = Double4::one() / Double4::from_f64(3.0);
        let err = third * Double4::from_f64(3.0) - Double4::one();
        assert!(libm::fabs(err.hi()) < 1e-62, "{:?}", err);
        let third = Double2::one() / Double2::from_f64(3.0);
        let err = third * Double2::from_f64(3.0) - Double2::one();
        assert!(libm::fabs(err.hi()) < 1e-30);
    }

    #[test]
    fn sqrt_two_squares_back() {
        let r = Double3::from_f64(2.0).sqrt();
        let err = r * r - Double3::from_f64(2.0);
        assert!(libm::fabs(err.hi()) < 1e-46);
    }

    #[test]
    fn quarter_turns_exact() {
        for (num, c, s) in [(0u64, 1.0, 0.0), (1, 0.0, 1.0), (2, -1.0, 0.0), (3, 0.0, -1.0)] {
            let (cf, sf) = f64::cos_sin_turns(num, 4);
            assert_eq!((cf, sf), (c, s));
            let (cm, sm) = Double2::cos_sin_turns(num, 4);
            assert_eq!((cm.hi(), sm.hi()), (c, s));
        }
    }

    #[test]
    fn roots_agree_across_precisions() {
        for den in [3u64, 7, 30, 45, 97] {
            for num in 0..den {
                let (cf, sf) = f64::cos_sin_turns(num, den);
                let (cm, sm) = Double4::cos_sin_turns(num, den);
                assert!(libm::fabs(cf - cm.to_f64()) < 4e-16);
                assert!(libm::fabs(sf - sm.to_f64()) < 4e-16);
                let one = cm * cm + sm * sm - Double4::one();
                assert!(libm::fabs(one.hi()) < 1e-60);
            }
        }
    }

    #[test]
    fn sixth_root_real_part_is_half() {
        let (c, _) = Double4::cos_sin_turns(1, 6);
        assert!(libm::fabs((c - Double4::from_f64(0.5)).hi()) < 1e-62);
    }

    #[test]
    fn parse_and_format() {
        let x = Double3::parse_decimal("-1.234567890123456789012345678901234567e-3").unwrap();
        assert_eq!(x.to_scientific(37), "-1.234567890123456789012345678901234567e-3");
        assert_eq!(Double2::parse_decimal("0").unwrap().to_scientific(3), "0.00e0");
        assert_eq!(Double2::from_f64(9.9996).to_scientific(4), "1.000e1");
        assert_eq!(f64::parse_decimal("2.5e2"), Some(250.0));
        assert_eq!(f64::parse_decimal("abc"), None);
        assert_eq!(Double2::parse_decimal("1e"), None);
        assert_eq!(Double2::parse_decimal("12").unwrap().to_scientific(1), "1e1");
    }

    #[test]
    fn integer_conversions() {
        let big: i128 = 123_456_789_012_345_678_901_234_567_890_123_456_789;
        assert_eq!(Double3::from_i128(big).to_i128(), Some(big));
        let w = I256::from(big) * I256::from(12345i32) - I256::from(7i32);
        let x = Double4::from_i256(w);
        let back = x - Double4::from_i128(big) * Double4::from_f64(12345.0);
        assert_eq!(back.to_f64(), -7.0);
        assert_eq!(Double2::from_f64(-2.5).round().to_f64(), -3.0);
        assert_eq!(Double2::from_f64(-2.5).trunc().to_f64(), -2.0);
        assert_eq!(Double2::from_f64(-2.5).floor().to_f64(), -3.0);
    }

    #[test]
    fn round_to_digits_truncates_information() {
        let x = Double2::one() / Double2::from_f64(3.0);
        let r = round_to_digits(x, 10);
        assert_eq!(r.to_scientific(12), "3.33333333300e-1");
    }
}
