//! Direct DFTs at the working precision, frequency decimation and stacking.
//!
//! The forward kernel is `e^{−2πi·nk/N}` in one and two dimensions.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{AddAssign, Index, IndexMut};

use crate::numtheory::gcd;
use crate::real::{Complex, Real};
use crate::Error;

/// Decimal digits of working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
}

/// Scalar type backing a [`PrecisionContext`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    F64,
    Double2,
    Double3,
    Double4,
}

impl PrecisionContext {
    pub const DEFAULT_DIGITS: u32 = 16;
    pub const MIN_DIGITS: u32 = 7;
    pub const MAX_DIGITS: u32 = 50;

    pub fn new(digits: u32) -> Result<Self, Error> {
        if !(Self::MIN_DIGITS..=Self::MAX_DIGITS).contains(&digits) {
            return Err(Error::Domain(alloc::format!(
                "digits must lie in [{}, {}], got {digits}",
                Self::MIN_DIGITS,
                Self::MAX_DIGITS
            )));
        }
        Ok(PrecisionContext { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn tier(&self) -> Tier {
        match self.digits {
            0..=16 => Tier::F64,
            17..=31 => Tier::Double2,
            32..=47 => Tier::Double3,
            _ => Tier::Double4,
        }
    }

    /// Round-trip tolerance `10^{−(digits−4)}`.
    pub fn tolerance(&self) -> f64 {
        libm::pow(10.0, -(self.digits as f64 - 4.0))
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            digits: Self::DEFAULT_DIGITS,
        }
    }
}

/// Runs `$body` with `$R` bound to the scalar type of `$tier`.
#[macro_export]
macro_rules! with_real {
    ($tier:expr, $R:ident => $body:expr) => {
        match $tier {
            $crate::Tier::F64 => {
                type $R = f64;
                $body
            }
            $crate::Tier::Double2 => {
                type $R = $crate::Double2;
                $body
            }
            $crate::Tier::Double3 => {
                type $R = $crate::Double3;
                $body
            }
            $crate::Tier::Double4 => {
                type $R = $crate::Double4;
                $body
            }
        }
    };
}

/// Row-major `rows × cols` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Grid<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Integer image.
pub type IntImage = Grid<i64>;

impl<T: Clone> Grid<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Grid {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }
}

impl<T> Grid<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::Domain(alloc::format!(
                "grid {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Grid { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for m in 0..rows {
            for n in 0..cols {
                data.push(f(m, n));
            }
        }
        Grid { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn row(&self, m: usize) -> &[T] {
        &self.data[m * self.cols..(m + 1) * self.cols]
    }

    /// Entry at `(k mod rows, l mod cols)`.
    pub fn periodic(&self, k: i64, l: i64) -> &T {
        let m = k.rem_euclid(self.rows as i64) as usize;
        let n = l.rem_euclid(self.cols as i64) as usize;
        &self[(m, n)]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Grid<T> {
    type Output = T;
    fn index(&self, (m, n): (usize, usize)) -> &T {
        &self.data[m * self.cols + n]
    }
}

impl<T> IndexMut<(usize, usize)> for Grid<T> {
    fn index_mut(&mut self, (m, n): (usize, usize)) -> &mut T {
        &mut self.data[m * self.cols + n]
    }
}

/// Powers `η_N^j = e^{−2πi j/N}` for `j < N`.
#[derive(Clone, Debug)]
pub struct RootTable<R> {
    roots: Vec<Complex<R>>,
}

impl<R: Real> RootTable<R> {
    pub fn new(n: usize) -> Self {
        let n = n.max(1);
        RootTable {
            roots: (0..n as u64).map(|j| Complex::root(j, n as u64)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// `η_N^e` for any integer exponent.
    pub fn pow(&self, e: u64) -> Complex<R> {
        self.roots[(e % self.roots.len() as u64) as usize]
    }

    pub fn dft(&self, x: &[Complex<R>]) -> Vec<Complex<R>> {
        self.transform(x, false)
    }

    pub fn idft(&self, x: &[Complex<R>]) -> Vec<Complex<R>> {
        let n = R::from_f64(x.len() as f64);
        self.transform(x, true)
            .into_iter()
            .map(|v| Complex::new(v.re / n, v.im / n))
            .collect()
    }

    /// Single forward coefficient `Σ x_n η^{nk}` of an integer signal.
    ///
    /// Entries are grouped by exponent exactly, the integer mean of the groups is removed
    /// (the roots involved sum to zero) and the remainder is summed with compensation.
    pub fn coefficient_int(&self, x: &[i64], k: u64) -> Complex<R> {
        let n = self.roots.len() as u64;
        let k = k % n;
        if k == 0 {
            let total: i128 = x.iter().map(|&v| v as i128).sum();
            return Complex::new(R::from_i128(total), R::zero());
        }
        let g = gcd(k, n);
        let mut buckets = vec![0i128; (n / g) as usize];
        for (i, &v) in x.iter().enumerate() {
            buckets[((i as u64 * k % n) / g) as usize] += v as i128;
        }
        let count = buckets.len() as i128;
        let total: i128 = buckets.iter().sum();
        let mean = (2 * total + total.signum() * count) / (2 * count);
        let (mut re, mut im) = (Compensated::default(), Compensated::default());
        for (j, &c) in buckets.iter().enumerate() {
            let c = c - mean;
            if c != 0 {
                let w = self.pow(j as u64 * g).scale(R::from_i128(c));
                re.add(w.re);
                im.add(w.im);
            }
        }
        Complex::new(re.value(), im.value())
    }

    fn transform(&self, x: &[Complex<R>], inverse: bool) -> Vec<Complex<R>> {
        let n = self.roots.len();
        assert_eq!(x.len(), n, "root table length mismatch");
        (0..n)
            .map(|k| {
                let mut acc = Complex::zero();
                for (i, &v) in x.iter().enumerate() {
                    let w = self.roots[(i * k) % n];
                    acc += v * if inverse { w.conj() } else { w };
                }
                acc
            })
            .collect()
    }
}

pub fn to_complex<R: Real>(x: &[i64]) -> Vec<Complex<R>> {
    x.iter().map(|&v| Complex::from_real(R::from_i64(v))).collect()
}

/// Forward 1D DFT.
pub fn dft_1d<R: Real>(x: &[Complex<R>]) -> Vec<Complex<R>> {
    RootTable::new(x.len()).dft(x)
}

/// Inverse 1D DFT, including the `1/N` factor.
pub fn idft_1d<R: Real>(x: &[Complex<R>]) -> Vec<Complex<R>> {
    RootTable::new(x.len()).idft(x)
}

/// Forward 1D DFT of an integer signal.
pub fn dft_1d_int<R: Real>(x: &[i64]) -> Vec<Complex<R>> {
    dft_1d(&to_complex::<R>(x))
}

fn transform_2d<R: Real>(x: &Grid<Complex<R>>, inverse: bool) -> Grid<Complex<R>> {
    let (rows, cols) = (x.rows(), x.cols());
    let tr = RootTable::<R>::new(cols);
    let tc = RootTable::<R>::new(rows);
    let mut out = Grid::filled(rows, cols, Complex::zero());
    for m in 0..rows {
        let r = if inverse { tr.idft(x.row(m)) } else { tr.dft(x.row(m)) };
        for (n, v) in r.into_iter().enumerate() {
            out[(m, n)] = v;
        }
    }
    let mut col = vec![Complex::zero(); rows];
    for n in 0..cols {
        for m in 0..rows {
            col[m] = out[(m, n)];
        }
        let c = if inverse { tc.idft(&col) } else { tc.dft(&col) };
        for (m, v) in c.into_iter().enumerate() {
            out[(m, n)] = v;
        }
    }
    out
}

/// Forward 2D DFT `X̃_{kl} = Σ X_{mn} e^{−2πi(mk/N₁ + nl/N₂)}`.
pub fn dft_2d<R: Real>(x: &Grid<Complex<R>>) -> Grid<Complex<R>> {
    transform_2d(x, false)
}

/// Inverse 2D DFT, including the `1/(N₁N₂)` factor.
pub fn idft_2d<R: Real>(x: &Grid<Complex<R>>) -> Grid<Complex<R>> {
    transform_2d(x, true)
}

/// Forward 2D DFT of an integer image.
pub fn dft_2d_int<R: Real>(x: &IntImage) -> Grid<Complex<R>> {
    dft_2d(&x.map(|&v| Complex::from_real(R::from_i64(v))))
}

/// Frequency decimation: entry `m` is `Σ_{n<d} x_{m+nN/d}`; keeps every `d`-th coefficient.
pub fn decimate_freq<T: Copy + Default + AddAssign>(x: &[T], d: usize) -> Result<Vec<T>, Error> {
    let n = x.len();
    if d == 0 || n % d != 0 {
        return Err(Error::Domain(alloc::format!("{d} does not divide length {n}")));
    }
    let len = n / d;
    let mut out = vec![T::default(); len];
    for (i, &v) in x.iter().enumerate() {
        out[i % len] += v;
    }
    Ok(out)
}

/// `d` consecutive copies of `x`.
pub fn stack_time(x: &[i64], d: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(x.len() * d);
    for _ in 0..d {
        out.extend_from_slice(x);
    }
    out
}

/// `y_{dn} = d·x_n`, zero elsewhere; the spectrum is `d` copies of `x̃`.
pub fn stack_freq(x: &[i64], d: usize) -> Vec<i64> {
    let mut out = vec![0i64; x.len() * d];
    for (n, &v) in x.iter().enumerate() {
        out[d * n] = d as i64 * v;
    }
    out
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy)]
struct Compensated<R> {
    sum: R,
    carry: R,
}

impl<R: Real> Default for Compensated<R> {
    fn default() -> Self {
        Compensated {
            sum: R::zero(),
            carry: R::zero(),
        }
    }
}

impl<R: Real> Compensated<R> {
    fn add(&mut self, v: R) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> R {
        self.sum + self.carry
    }
}
