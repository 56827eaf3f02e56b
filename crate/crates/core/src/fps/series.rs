//! Truncated power series `a_0 + a_1 z + ... + a_K z^K + O(z^{K+1})`.

use super::coeff::{Coeff, Q};
use crate::error::{Error, Result};
use std::ops::{Add, Mul, Neg, Sub};

/// A series known modulo `z^{order+1}`.
///
/// Binary operations truncate to the smaller operand order; nothing is ever
/// padded with zeros to reach a higher order.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<C: Coeff = Q> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Series<C> {
    /// Builds from coefficients `a_0..a_K`; the order is `len - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Series { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> C) -> Self {
        Series::new((0..=order).map(f).collect())
    }

    pub fn zero(order: usize) -> Self {
        Series::new(vec![C::zero(); order + 1])
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Series::constant(C::one(), order)
    }

    /// The series `z`.
    pub fn var(order: usize) -> Self {
        let mut s = Series::zero(order);
        if order >= 1 {
            s.coeffs[1] = C::one();
        }
        s
    }

    /// Geometric series `1/(1 - c z)`.
    pub fn geometric(c: &C, order: usize) -> Self {
        let mut out = Vec::with_capacity(order + 1);
        let mut p = C::one();
        for _ in 0..=order {
            out.push(p.clone());
            p = p.mul(c);
        }
        Series::new(out)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `z^n`.
    ///
    /// # Panics
    /// If `n` exceeds the order.
    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn get(&self, n: usize) -> Option<&C> {
        self.coeffs.get(n)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Drops coefficients above `order`. Asking for a higher order is an error.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::OrderOutOfRange { requested: order, available: self.order() });
        }
        Ok(Series::new(self.coeffs[..=order].to_vec()))
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series::new(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|a| a.mul(c))
    }

    /// Multiplies by `z^n`; the order grows by `n`.
    pub fn shift_up(&self, n: usize) -> Self {
        let mut out = vec![C::zero(); n];
        out.extend(self.coeffs.iter().cloned());
        Series::new(out)
    }

    /// Divides by `z^n`; the low coefficients must vanish.
    pub fn shift_down(&self, n: usize) -> Result<Self> {
        if n > self.order() {
            return Err(Error::OrderOutOfRange { requested: n, available: self.order() });
        }
        if self.coeffs[..n].iter().any(|c| !c.is_zero()) {
            return Err(Error::NonzeroConstant("division by a power of z"));
        }
        Ok(Series::new(self.coeffs[n..].to_vec()))
    }

    pub fn add(&self, o: &Self) -> Self {
        let k = self.order().min(o.order());
        Series::from_fn(k, |i| self.coeffs[i].add(&o.coeffs[i]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let k = self.order().min(o.order());
        Series::from_fn(k, |i| self.coeffs[i].sub(&o.coeffs[i]))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let k = self.order().min(o.order());
        let mut out = vec![C::zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(k + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(k + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Series::new(out)
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let k = self.order();
        let mut b: Vec<C> = Vec::with_capacity(k + 1);
        b.push(C::one().div(a0));
        for n in 1..=k {
            let mut s = C::zero();
            for i in 1..=n {
                if !self.coeffs[i].is_zero() {
                    s = s.add(&self.coeffs[i].mul(&b[n - i]));
                }
            }
            b.push(s.neg().div(a0));
        }
        Ok(Series::new(b))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    /// `f^n` for a nonnegative integer power.
    pub fn pow(&self, n: u32) -> Self {
        let mut result = Series::one(self.order());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Formal derivative; the order drops by one (an order-0 series stays order 0 with value 0).
    pub fn derivative(&self) -> Self {
        let k = self.order();
        if k == 0 {
            return Series::zero(0);
        }
        Series::from_fn(k - 1, |i| self.coeffs[i + 1].mul(&C::from_int(i as i64 + 1)))
    }

    /// Antiderivative with zero constant term; the order grows by one.
    pub fn integral(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(C::zero());
        for (i, a) in self.coeffs.iter().enumerate() {
            out.push(a.div(&C::from_int(i as i64 + 1)));
        }
        Series::new(out)
    }

    /// `f(g(z))`; `g` must have zero constant term.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant("inner series of a composition"));
        }
        let k = self.order().min(g.order());
        let g = g.truncate(k)?;
        let mut acc = Series::constant(self.coeffs[k].clone(), k);
        for i in (0..k).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] = acc.coeffs[0].add(&self.coeffs[i]);
        }
        Ok(acc)
    }

    /// Compositional inverse by order-by-order solve.
    ///
    /// Needs `f(0) = 0` and `f'(0) != 0`. Keeps the table `pw[j][m] = [z^m] g^j`;
    /// at step `n` only the `j = 1` column involves the unknown `g_n`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NoInverse("constant term is nonzero"));
        }
        let k = self.order();
        if k == 0 {
            return Ok(Series::zero(0));
        }
        let f1 = self.coeffs[1].clone();
        if f1.is_zero() {
            return Err(Error::NoInverse("linear coefficient is zero"));
        }
        // pw[j][m], j = 1..=k, m = 0..=k
        let mut pw: Vec<Vec<C>> = vec![vec![C::zero(); k + 1]; k + 1];
        let mut g = vec![C::zero(); k + 1];
        g[1] = C::one().div(&f1);
        pw[1][1] = g[1].clone();
        for n in 2..=k {
            let mut s = C::zero();
            for j in 2..=n {
                let mut c = C::zero();
                for i in 1..=(n + 1 - j) {
                    if !g[i].is_zero() && !pw[j - 1][n - i].is_zero() {
                        c = c.add(&g[i].mul(&pw[j - 1][n - i]));
                    }
                }
                if !self.coeffs[j].is_zero() {
                    s = s.add(&self.coeffs[j].mul(&c));
                }
                pw[j][n] = c;
            }
            g[n] = s.neg().div(&f1);
            pw[1][n] = g[n].clone();
        }
        Ok(Series::new(g))
    }

    /// `log(1 + f)` for `f(0) = 0`, via the integral of `f'/(1+f)`.
    pub fn log1p(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant("log1p argument"));
        }
        let k = self.order();
        if k == 0 {
            return Ok(Series::zero(0));
        }
        let mut onep = self.clone();
        onep.coeffs[0] = C::one();
        let q = self.derivative().div(&onep.truncate(k - 1)?)?;
        Ok(q.integral())
    }

    /// `exp(f)` for `f(0) = 0`, via `E_n = (1/n) sum_k k f_k E_{n-k}`.
    pub fn exp0(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant("exp0 argument"));
        }
        let k = self.order();
        let mut e: Vec<C> = Vec::with_capacity(k + 1);
        e.push(C::one());
        for n in 1..=k {
            let mut s = C::zero();
            for j in 1..=n {
                if !self.coeffs[j].is_zero() {
                    s = s.add(&self.coeffs[j].mul(&e[n - j]).mul(&C::from_int(j as i64)));
                }
            }
            e.push(s.div(&C::from_int(n as i64)));
        }
        Ok(Series::new(e))
    }
}

impl Series<Q> {
    /// Evaluates the truncated polynomial at a complex point in double precision.
    pub fn eval_complex(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_f64();
        }
        acc
    }

    pub fn to_f64(&self) -> Series<f64> {
        self.map(|c| c.to_f64())
    }
}

/// `[z^n] (F^{(-1)})^k` via `n [z^n] (F^{(-1)})^k = k [z^{n-k}] (z/F)^n`.
///
/// Uses only multiplication and reciprocal, never [`Series::inverse`].
pub fn lagrange_coeff<C: Coeff>(f: &Series<C>, n: usize, k: usize) -> Result<C> {
    if !f.coeffs[0].is_zero() {
        return Err(Error::NoInverse("constant term is nonzero"));
    }
    if f.order() < 1 || f.coeffs[1].is_zero() {
        return Err(Error::NoInverse("linear coefficient is zero"));
    }
    if k == 0 || k > n || n > f.order() {
        return Err(Error::OrderOutOfRange { requested: n, available: f.order() });
    }
    // F/z has order K-1 and a unit constant term.
    let f_over_z = f.shift_down(1)?;
    let h = f_over_z.recip()?.pow(n as u32);
    let c = h.coeff(n - k).mul(&C::from_int(k as i64));
    Ok(c.div(&C::from_int(n as i64)))
}

impl<'a, C: Coeff> Add for &'a Series<C> {
    type Output = Series<C>;
    fn add(self, o: Self) -> Series<C> {
        Series::add(self, o)
    }
}

impl<'a, C: Coeff> Sub for &'a Series<C> {
    type Output = Series<C>;
    fn sub(self, o: Self) -> Series<C> {
        Series::sub(self, o)
    }
}

impl<'a, C: Coeff> Mul for &'a Series<C> {
    type Output = Series<C>;
    fn mul(self, o: Self) -> Series<C> {
        Series::mul(self, o)
    }
}

impl<'a, C: Coeff> Neg for &'a Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        Series::neg(self)
    }
}
