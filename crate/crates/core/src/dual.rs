//! First-order dual numbers `x + y·ε` with ε a positive infinitesimal.
//!
//! Comparison is lexicographic on `(main, eps)`, which is exactly the order of
//! `x + y·δ` for every sufficiently small real `δ > 0`. Products drop the `ε²`
//! term.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Dual<T> {
    pub main: T,
    pub eps: T,
}

impl<T> Dual<T> {
    pub const fn new(main: T, eps: T) -> Self {
        Self { main, eps }
    }
}

impl<T: Zero> Dual<T> {
    pub fn constant(main: T) -> Self {
        Self { main, eps: T::zero() }
    }
}

impl<T: Scalar> Dual<T> {
    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.main.clone() * c.clone(), self.eps.clone() * c.clone())
    }
}

impl<T: PartialOrd> PartialOrd for Dual<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.main.partial_cmp(&other.main)? {
            Ordering::Equal => self.eps.partial_cmp(&other.eps),
            ord => Some(ord),
        }
    }
}

impl<T: Ord> Ord for Dual<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.main.cmp(&other.main).then_with(|| self.eps.cmp(&other.eps))
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.main + rhs.main, self.eps + rhs.eps)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.main - rhs.main, self.eps - rhs.eps)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.main, -self.eps)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let eps = self.main.clone() * rhs.eps + self.eps * rhs.main.clone();
        Self::new(self.main * rhs.main, eps)
    }
}

impl<T: fmt::Display + Zero + PartialOrd> fmt::Display for Dual<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.eps.is_zero() {
            write!(f, "{}", self.main)
        } else if self.eps > T::zero() {
            write!(f, "{}+{}ε", self.main, self.eps)
        } else {
            write!(f, "{}{}ε", self.main, self.eps)
        }
    }
}
