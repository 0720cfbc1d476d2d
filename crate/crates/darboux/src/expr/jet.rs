//! Truncated-Taylor jets and the scalar abstraction the evaluator runs on.
//!
//! A `Jet<N>` carries a value and its first `N - 1` derivatives with respect
//! to one parameter.  Arithmetic follows the Leibniz and Faà di Bruno rules
//! exactly, so evaluating an expression on `Jet::variable(s)` yields the
//! exact derivatives of the expression at `s` (to floating precision).
//!
//! `Dual<T>` is a first-order dual number over any scalar; seeding the dual
//! part on one argument of a bivariate expression extracts a partial
//! derivative while the base scalar (typically a jet in the curve parameter)
//! keeps propagating parameter derivatives.

use std::ops::{Add, Div, Mul, Neg, Sub};

const FACT: [f64; 8] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0];

fn binom(n: usize, k: usize) -> f64 {
    FACT[n] / (FACT[k] * FACT[n - k])
}

/// Scalar types the expression evaluator can run on: plain numbers, jets,
/// and duals over either.
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(x: f64) -> Self;
    /// The underlying value, used for domain checks.
    fn primal(self) -> f64;
    /// True when every derivative part is zero.
    fn is_constant(self) -> bool;

    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn tan(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn atan(self) -> Self;

    /// Integer power by repeated multiplication (exact at base 0).
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::constant(1.0);
        }
        let mut base = if n < 0 {
            Self::constant(1.0) / self
        } else {
            self
        };
        let mut e = n.unsigned_abs();
        let mut acc: Option<Self> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a * base,
                    None => base,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc.unwrap()
    }
}

impl Real for f64 {
    fn constant(x: f64) -> Self {
        x
    }
    fn primal(self) -> f64 {
        self
    }
    fn is_constant(self) -> bool {
        true
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn tan(self) -> Self {
        f64::tan(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    fn atan(self) -> Self {
        f64::atan(self)
    }
}

/// Value plus derivatives `d[1..N]` of one scalar function of one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<const N: usize> {
    d: [f64; N],
}

/// The public AD currency: value and first three derivatives.
pub type Jet3 = Jet<4>;

/// Internal working order: deep enough that third derivatives of associated
/// curves (which mix curvature second derivatives) stay exact.
pub type Jet5 = Jet<6>;

impl<const N: usize> Jet<N> {
    pub fn new(d: [f64; N]) -> Self {
        Jet { d }
    }

    pub fn zero() -> Self {
        Jet { d: [0.0; N] }
    }

    /// Seed for the evaluation parameter: value `x`, first derivative 1.
    pub fn variable(x: f64) -> Self {
        let mut d = [0.0; N];
        d[0] = x;
        if N > 1 {
            d[1] = 1.0;
        }
        Jet { d }
    }

    /// k-th derivative (k = 0 is the value).
    pub fn dk(&self, k: usize) -> f64 {
        self.d[k]
    }

    pub fn v0(&self) -> f64 {
        self.d[0]
    }
    pub fn v1(&self) -> f64 {
        self.d[1]
    }
    pub fn v2(&self) -> f64 {
        self.d[2]
    }
    pub fn v3(&self) -> f64 {
        self.d[3]
    }

    pub fn coeffs(&self) -> &[f64; N] {
        &self.d
    }

    /// Zero every derivative above `order`.  Used where an input carries
    /// fewer valid derivatives than the jet can hold, so that stale slots do
    /// not leak into downstream products.
    pub fn truncated(mut self, order: usize) -> Self {
        for k in (order + 1)..N {
            self.d[k] = 0.0;
        }
        self
    }

    /// The jet of the derivative function (one order shallower).
    pub fn derivative(self) -> Self {
        let mut d = [0.0; N];
        d[..N - 1].copy_from_slice(&self.d[1..]);
        Jet { d }
    }

    /// The jet of an antiderivative whose value at this point is `value`.
    pub fn antiderivative(self, value: f64) -> Self {
        let mut d = [0.0; N];
        d[0] = value;
        d[1..].copy_from_slice(&self.d[..N - 1]);
        Jet { d }
    }

    pub fn is_finite(&self) -> bool {
        self.d.iter().all(|x| x.is_finite())
    }

    /// Compose with a univariate function given its derivatives
    /// `g[k] = g^(k)(self.d[0])`.  Standard truncated power-series
    /// composition: the tail of `self` has zero constant term, so the finite
    /// Horner sum over Taylor coefficients is exact.
    fn compose(self, g: [f64; N]) -> Self {
        // Taylor coefficients of the tail.
        let mut tail = [0.0; N];
        for k in 1..N {
            tail[k] = self.d[k] / FACT[k];
        }
        let mut r = [0.0; N];
        r[0] = g[N - 1] / FACT[N - 1];
        for j in (0..N - 1).rev() {
            // r = r * tail + g[j]/j!
            let mut nr = [0.0; N];
            for a in 0..N {
                if r[a] == 0.0 {
                    continue;
                }
                for b in 0..N - a {
                    nr[a + b] += r[a] * tail[b];
                }
            }
            nr[0] += g[j] / FACT[j];
            r = nr;
        }
        let mut d = [0.0; N];
        for k in 0..N {
            d[k] = r[k] * FACT[k];
        }
        Jet { d }
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.d[k] += rhs.d[k];
        }
        self
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.d[k] -= rhs.d[k];
        }
        self
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for k in 0..N {
            self.d[k] = -self.d[k];
        }
        self
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut d = [0.0; N];
        for n in 0..N {
            let mut acc = 0.0;
            for k in 0..=n {
                acc += binom(n, k) * self.d[k] * rhs.d[n - k];
            }
            d[n] = acc;
        }
        Jet { d }
    }
}

impl<const N: usize> Div for Jet<N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        // Solve h * rhs = self order by order (Leibniz).
        let mut h = [0.0; N];
        for n in 0..N {
            let mut acc = self.d[n];
            for k in 0..n {
                acc -= binom(n, k) * h[k] * rhs.d[n - k];
            }
            h[n] = acc / rhs.d[0];
        }
        Jet { d: h }
    }
}

impl<const N: usize> Mul<f64> for Jet<N> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for k in 0..N {
            self.d[k] *= rhs;
        }
        self
    }
}

impl<const N: usize> Real for Jet<N> {
    fn constant(x: f64) -> Self {
        let mut d = [0.0; N];
        d[0] = x;
        Jet { d }
    }

    fn primal(self) -> f64 {
        self.d[0]
    }

    fn is_constant(self) -> bool {
        self.d[1..].iter().all(|&x| x == 0.0)
    }

    fn sin(self) -> Self {
        let (s, c) = self.d[0].sin_cos();
        let cyc = [s, c, -s, -c];
        let mut g = [0.0; N];
        for (k, slot) in g.iter_mut().enumerate() {
            *slot = cyc[k % 4];
        }
        self.compose(g)
    }

    fn cos(self) -> Self {
        let (s, c) = self.d[0].sin_cos();
        let cyc = [c, -s, -c, s];
        let mut g = [0.0; N];
        for (k, slot) in g.iter_mut().enumerate() {
            *slot = cyc[k % 4];
        }
        self.compose(g)
    }

    fn tan(self) -> Self {
        self.sin() / self.cos()
    }

    fn exp(self) -> Self {
        let e = self.d[0].exp();
        self.compose([e; N])
    }

    fn ln(self) -> Self {
        let u = self.d[0];
        let mut g = [0.0; N];
        g[0] = u.ln();
        if N > 1 {
            g[1] = 1.0 / u;
            for k in 2..N {
                g[k] = g[k - 1] * (-((k - 1) as f64)) / u;
            }
        }
        self.compose(g)
    }

    fn sqrt(self) -> Self {
        let u = self.d[0];
        let mut g = [0.0; N];
        g[0] = u.sqrt();
        if N > 1 {
            g[1] = 0.5 / g[0];
            for k in 2..N {
                g[k] = g[k - 1] * ((3.0 - 2.0 * k as f64) / 2.0) / u;
            }
        }
        self.compose(g)
    }

    fn sinh(self) -> Self {
        let (sh, ch) = (self.d[0].sinh(), self.d[0].cosh());
        let mut g = [0.0; N];
        for (k, slot) in g.iter_mut().enumerate() {
            *slot = if k % 2 == 0 { sh } else { ch };
        }
        self.compose(g)
    }

    fn cosh(self) -> Self {
        let (sh, ch) = (self.d[0].sinh(), self.d[0].cosh());
        let mut g = [0.0; N];
        for (k, slot) in g.iter_mut().enumerate() {
            *slot = if k % 2 == 0 { ch } else { sh };
        }
        self.compose(g)
    }

    fn atan(self) -> Self {
        // atan^(k)(u) = P_k(u) / (1 + u^2)^k, tabulated through order 5.
        assert!(N <= 6, "atan derivative table covers order 5");
        let u = self.d[0];
        let w = 1.0 / (1.0 + u * u);
        let tab = [
            u.atan(),
            w,
            -2.0 * u * w * w,
            (6.0 * u * u - 2.0) * w * w * w,
            (24.0 * u - 24.0 * u * u * u) * w * w * w * w,
            24.0 * (1.0 - 10.0 * u * u + 5.0 * u * u * u * u) * w * w * w * w * w,
        ];
        let mut g = [0.0; N];
        g.copy_from_slice(&tab[..N]);
        self.compose(g)
    }
}

/// First-order dual number over any scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub du: T,
}

impl<T: Real> Dual<T> {
    pub fn new(re: T, du: T) -> Self {
        Dual { re, du }
    }

    /// Lift a scalar with zero dual part.
    pub fn lift(re: T) -> Self {
        Dual {
            re,
            du: T::constant(0.0),
        }
    }

    /// Lift a scalar seeded as the differentiation direction.
    pub fn seeded(re: T) -> Self {
        Dual {
            re,
            du: T::constant(1.0),
        }
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.re + rhs.re, self.du + rhs.du)
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.re - rhs.re, self.du - rhs.du)
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.du)
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Dual::new(self.re * rhs.re, self.re * rhs.du + self.du * rhs.re)
    }
}

impl<T: Real> Div for Dual<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q = self.re / rhs.re;
        Dual::new(q, (self.du - q * rhs.du) / rhs.re)
    }
}

impl<T: Real> Real for Dual<T> {
    fn constant(x: f64) -> Self {
        Dual::lift(T::constant(x))
    }

    fn primal(self) -> f64 {
        self.re.primal()
    }

    fn is_constant(self) -> bool {
        self.re.is_constant() && self.du.is_constant() && self.du.primal() == 0.0
    }

    fn sin(self) -> Self {
        Dual::new(self.re.sin(), self.re.cos() * self.du)
    }

    fn cos(self) -> Self {
        Dual::new(self.re.cos(), -(self.re.sin() * self.du))
    }

    fn tan(self) -> Self {
        let t = self.re.tan();
        Dual::new(t, (T::constant(1.0) + t * t) * self.du)
    }

    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual::new(e, e * self.du)
    }

    fn ln(self) -> Self {
        Dual::new(self.re.ln(), self.du / self.re)
    }

    fn sqrt(self) -> Self {
        let r = self.re.sqrt();
        Dual::new(r, self.du / (T::constant(2.0) * r))
    }

    fn sinh(self) -> Self {
        Dual::new(self.re.sinh(), self.re.cosh() * self.du)
    }

    fn cosh(self) -> Self {
        Dual::new(self.re.cosh(), self.re.sinh() * self.du)
    }

    fn atan(self) -> Self {
        Dual::new(
            self.re.atan(),
            self.du / (T::constant(1.0) + self.re * self.re),
        )
    }
}
