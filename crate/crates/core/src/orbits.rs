//! Reeb spectrum of an ellipsoid `E(a_1,…,a_n)`.
//!
//! Orbits `ν_i^m` have action `m·a_i`. Ties between actions are broken by a
//! first-order perturbation of the parameter vector (see [`Side`]), so every
//! action is a distinct [`DualRational`] and the lattice path `Γ` is a
//! well-defined greedy walk: from `Γ_j`, step along the axis whose next
//! multiple is smallest.

use std::fmt;
use std::sync::RwLock;

use num_traits::{One, Signed, Zero};

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::exact::{int, LatticePoint};
use crate::{DualRational, Rational};

/// How ties between actions are resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// Second component perturbed down: `a_2 - δ`. Two components only.
    Minus,
    /// Multiplicative perturbation `a_i ↦ a_i(1 + i·ε)`.
    Canonical,
    /// Second component perturbed up: `a_2 + δ`. Two components only.
    Plus,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Minus => "minus",
            Side::Canonical => "canonical",
            Side::Plus => "plus",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "minus" | "-" => Ok(Side::Minus),
            "canonical" | "" => Ok(Side::Canonical),
            "plus" | "+" => Ok(Side::Plus),
            other => Err(Error::Parse(format!("unknown side {other:?}"))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpectrumParams {
    a: Vec<Rational>,
    side: Side,
}

impl SpectrumParams {
    pub fn new(a: Vec<Rational>, side: Side) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidParams("need at least one component".into()));
        }
        if let Some(bad) = a.iter().find(|x| !x.is_positive()) {
            return Err(Error::InvalidParams(format!("component {bad} is not positive")));
        }
        if side != Side::Canonical && a.len() != 2 {
            return Err(Error::InvalidSide {
                side: side.name(),
                n: a.len(),
            });
        }
        Ok(Self { a, side })
    }

    pub fn canonical(a: Vec<Rational>) -> Result<Self> {
        Self::new(a, Side::Canonical)
    }

    /// The normalized four-dimensional vector `(1, a)`.
    pub fn plane(a: Rational, side: Side) -> Result<Self> {
        Self::new(vec![Rational::one(), a], side)
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn with_side(&self, side: Side) -> Result<Self> {
        Self::new(self.a.clone(), side)
    }

    /// Perturbed action of `ν_axis^mult` (axes are 1-based).
    pub fn perturbed_value(&self, axis: usize, mult: u32) -> DualRational {
        assert!((1..=self.dim()).contains(&axis), "axis {axis} out of range");
        let m = int(i64::from(mult));
        let main = &self.a[axis - 1] * &m;
        let eps = match self.side {
            Side::Canonical => &main * int(axis as i64),
            Side::Plus if axis == 2 => m,
            Side::Minus if axis == 2 => -m,
            Side::Plus | Side::Minus => Rational::zero(),
        };
        Dual::new(main, eps)
    }
}

impl fmt::Display for SpectrumParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.a.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")?;
        match self.side {
            Side::Canonical => Ok(()),
            Side::Plus => write!(f, "+"),
            Side::Minus => write!(f, "-"),
        }
    }
}

/// The orbit `ν_axis^multiplicity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitId {
    /// 1-based.
    pub axis: usize,
    pub multiplicity: u32,
}

impl fmt::Display for OrbitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nu_{}^{}", self.axis, self.multiplicity)
    }
}

#[derive(Debug)]
struct Walk {
    points: Vec<LatticePoint>,
    /// `axes[j]` is the 1-based axis stepped along to reach `points[j + 1]`.
    axes: Vec<usize>,
}

/// Spectrum parameters together with a memo of the greedy walk prefix.
#[derive(Debug)]
pub struct Spectrum {
    params: SpectrumParams,
    walk: RwLock<Walk>,
}

impl Clone for Spectrum {
    fn clone(&self) -> Self {
        let walk = self.walk.read().expect("walk lock poisoned");
        Self {
            params: self.params.clone(),
            walk: RwLock::new(Walk {
                points: walk.points.clone(),
                axes: walk.axes.clone(),
            }),
        }
    }
}

impl Spectrum {
    pub fn new(params: SpectrumParams) -> Self {
        let origin = LatticePoint::origin(params.dim());
        Self {
            params,
            walk: RwLock::new(Walk {
                points: vec![origin],
                axes: Vec::new(),
            }),
        }
    }

    pub fn params(&self) -> &SpectrumParams {
        &self.params
    }

    fn ensure(&self, k: usize) {
        if self.walk.read().expect("walk lock poisoned").points.len() > k {
            return;
        }
        let mut walk = self.walk.write().expect("walk lock poisoned");
        while walk.points.len() <= k {
            let last = walk.points.last().expect("walk starts at the origin").clone();
            let axis = (1..=self.params.dim())
                .min_by(|&i, &j| {
                    let vi = self.params.perturbed_value(i, last[i - 1] + 1);
                    let vj = self.params.perturbed_value(j, last[j - 1] + 1);
                    vi.cmp(&vj)
                })
                .expect("at least one axis");
            walk.points.push(last.with_increment(axis - 1));
            walk.axes.push(axis);
        }
    }

    /// `Γ_k`.
    pub fn gamma(&self, k: usize) -> LatticePoint {
        self.ensure(k);
        self.walk.read().expect("walk lock poisoned").points[k].clone()
    }

    /// `o_k`, the orbit of k-th smallest action (`k ≥ 1`).
    pub fn orbit(&self, k: usize) -> OrbitId {
        assert!(k >= 1, "orbits are indexed from 1");
        self.ensure(k);
        let walk = self.walk.read().expect("walk lock poisoned");
        let axis = walk.axes[k - 1];
        OrbitId {
            axis,
            multiplicity: walk.points[k][axis - 1],
        }
    }

    pub fn dual_action(&self, k: usize) -> DualRational {
        let o = self.orbit(k);
        self.params.perturbed_value(o.axis, o.multiplicity)
    }

    /// `A(o_k)`, the k-th smallest element of `{m·a_i}`.
    pub fn action(&self, k: usize) -> Rational {
        self.dual_action(k).main
    }
}

pub fn gamma(p: &SpectrumParams, k: usize) -> LatticePoint {
    Spectrum::new(p.clone()).gamma(k)
}

pub fn orbit(p: &SpectrumParams, k: usize) -> OrbitId {
    Spectrum::new(p.clone()).orbit(k)
}

pub fn action(p: &SpectrumParams, k: usize) -> Rational {
    Spectrum::new(p.clone()).action(k)
}

pub fn perturbed_value(p: &SpectrumParams, axis: usize, mult: u32) -> DualRational {
    p.perturbed_value(axis, mult)
}

/// `J_k = {k/1, (k-1)/2, …, 1/k}`, ascending.
pub fn jump_set(k: u32) -> Vec<Rational> {
    assert!(k >= 1, "jump sets are indexed from 1");
    let mut out: Vec<Rational> = (0..k).map(|j| Rational::new((k - j).into(), (j + 1).into())).collect();
    out.sort();
    out
}

/// `⋃_{s ∈ indices} J_s`, sorted and deduplicated.
pub fn jump_union<I: IntoIterator<Item = u32>>(indices: I) -> Vec<Rational> {
    let mut out: Vec<Rational> = indices.into_iter().flat_map(jump_set).collect();
    out.sort();
    out.dedup();
    out
}

/// Values of `⋃_{i=1}^d J_{3i-1}` strictly greater than `lower`, ascending.
pub fn candidate_discontinuities(d: u32, lower: &Rational) -> Vec<Rational> {
    jump_union((1..=d).map(|i| 3 * i - 1))
        .into_iter()
        .filter(|x| x > lower)
        .collect()
}
