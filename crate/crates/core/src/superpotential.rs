//! Ellipsoidal superpotentials `T̃_{M,A}^a` and `T_{M,A}^a`.
//!
//! The recursion expresses `T̃` through the closed stationary descendant of
//! the target and the lattice path of the ellipsoid:
//!
//! `T̃_A = Γ_{c1(A)-1}! · (N_A − Σ_{A = A_1+⋯+A_k, k≥2} ∏ T̃_{A_s} / (|Aut|·(Σ Γ_{c1(A_s)-1})!))`
//!
//! summed over unordered decompositions into classes with `c1 ≥ 2`.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{aut_order, factorial, int, lattice_sum, multinomial, partitions, vec_factorial};
use crate::orbits::{candidate_discontinuities, Side, Spectrum, SpectrumParams};
use crate::Rational;

/// A closed target manifold together with the data entering the recursion.
pub trait TargetSpace: Send + Sync {
    type Class: Clone + Ord + Hash + Debug + Send + Sync;

    fn c1(&self, class: &Self::Class) -> u32;

    /// `ω · A`.
    fn area(&self, class: &Self::Class) -> Rational;

    /// `N_{M,A}⟨ψ^{c1(A)-2} pt⟩`.
    fn closed_descendant(&self, class: &Self::Class) -> Rational;

    /// Unordered decompositions `A = A_1 + ⋯ + A_k` with `k ≥ 2` and every
    /// `c1(A_s) ≥ 2`, each as a sorted list.
    fn decompositions(&self, class: &Self::Class) -> Vec<Vec<Self::Class>>;
}

/// `CP²` with classes `d·[L]`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Cp2;

impl TargetSpace for Cp2 {
    type Class = u32;

    fn c1(&self, d: &u32) -> u32 {
        3 * d
    }

    fn area(&self, d: &u32) -> Rational {
        int(i64::from(*d))
    }

    fn closed_descendant(&self, d: &u32) -> Rational {
        closed_descendant_toric(&[*d, *d, *d]).expect("positive degrees")
    }

    fn decompositions(&self, d: &u32) -> Vec<Vec<u32>> {
        partitions(*d)
            .filter(|p| p.len() >= 2)
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect()
    }
}

/// `N⟨ψ^{c1-2} pt⟩ = (∏ d_i!)^{-1}` for a Fano toric target, where
/// `d_i = A · D_i` over the toric divisors.
pub fn closed_descendant_toric(divisor_degrees: &[u32]) -> Result<Rational> {
    if divisor_degrees.is_empty() || divisor_degrees.contains(&0) {
        return Err(Error::OutOfScope(
            "closed descendant formula needs every divisor degree positive".into(),
        ));
    }
    let prod: BigUint = divisor_degrees.iter().map(|&d| factorial(d)).product();
    Ok(Rational::new(BigInt::one(), BigInt::from(prod)))
}

fn inv_factorial(n: &BigUint) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(n.clone()))
}

/// Evaluates the recursion at one parameter point, memoizing per class.
pub struct Superpotential<'t, T: TargetSpace> {
    target: &'t T,
    spectrum: Spectrum,
    memo: RwLock<HashMap<T::Class, Rational>>,
}

impl<'t, T: TargetSpace> Superpotential<'t, T> {
    pub fn new(target: &'t T, p: &SpectrumParams) -> Self {
        Self {
            target,
            spectrum: Spectrum::new(p.clone()),
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &SpectrumParams {
        self.spectrum.params()
    }

    /// `T̃_A`, zero when `c1(A) < 2`.
    pub fn wt_t(&self, class: &T::Class) -> Rational {
        let c1 = self.target.c1(class);
        if c1 < 2 {
            return Rational::zero();
        }
        if let Some(v) = self.memo.read().expect("memo lock poisoned").get(class) {
            return v.clone();
        }
        let mut bracket = self.target.closed_descendant(class);
        for parts in self.target.decompositions(class) {
            let mut prod = Rational::one();
            for part in &parts {
                prod *= self.wt_t(part);
                if prod.is_zero() {
                    break;
                }
            }
            if prod.is_zero() {
                continue;
            }
            let gammas: Vec<_> = parts
                .iter()
                .map(|c| self.spectrum.gamma(self.target.c1(c) as usize - 1))
                .collect();
            let denom = aut_order(&parts) * vec_factorial(&lattice_sum(&gammas));
            bracket -= prod * inv_factorial(&denom);
        }
        let lead = vec_factorial(&self.spectrum.gamma(c1 as usize - 1));
        let value = bracket * Rational::from_integer(BigInt::from(lead));
        self.memo
            .write()
            .expect("memo lock poisoned")
            .entry(class.clone())
            .or_insert(value.clone());
        value
    }

    /// Covering multiplicity of `o_{c1(A)-1}`.
    pub fn multiplicity(&self, class: &T::Class) -> Result<u32> {
        let c1 = self.c1_checked(class)?;
        Ok(self.spectrum.orbit(c1 as usize - 1).multiplicity)
    }

    /// `T_A = T̃_A / mult(o_{c1(A)-1})`.
    pub fn t(&self, class: &T::Class) -> Result<Rational> {
        let m = self.multiplicity(class)?;
        Ok(self.wt_t(class) / int(i64::from(m)))
    }

    fn c1_checked(&self, class: &T::Class) -> Result<u32> {
        let c1 = self.target.c1(class);
        if c1 < 2 {
            return Err(Error::OutOfScope(format!("c1 = {c1} < 2 has no asymptotic orbit")));
        }
        Ok(c1)
    }

    /// Upper bound on `c` for `E(c·a) × C^N ↪ M × C^N` forced by a nonzero
    /// superpotential: `(ω·A) / A(o_{c1(A)-1})`.
    pub fn embedding_bound(&self, class: &T::Class) -> Result<EmbeddingBound> {
        let c1 = self.c1_checked(class)?;
        if self.wt_t(class).is_zero() {
            return Ok(EmbeddingBound::NoObstruction);
        }
        let action = self.spectrum.action(c1 as usize - 1);
        Ok(EmbeddingBound::Bound(self.target.area(class) / action))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EmbeddingBound {
    Bound(Rational),
    /// The superpotential vanishes, so this class gives no obstruction.
    NoObstruction,
}

pub fn wt_t<T: TargetSpace>(target: &T, class: &T::Class, p: &SpectrumParams) -> Rational {
    Superpotential::new(target, p).wt_t(class)
}

pub fn t<T: TargetSpace>(target: &T, class: &T::Class, p: &SpectrumParams) -> Result<Rational> {
    Superpotential::new(target, p).t(class)
}

pub fn embedding_bound<T: TargetSpace>(target: &T, class: &T::Class, p: &SpectrumParams) -> Result<EmbeddingBound> {
    Superpotential::new(target, p).embedding_bound(class)
}

/// `T̃_d` for `CP²` in the limit `a → ∞`, where `Γ_{3d-1} = (3d-1, 0)`:
/// `T̃_d = (3d-1)! ((d!)^{-3} − Σ ∏ T̃_{d_s} / (|Aut| (Σ(3d_s-1))!))`.
///
/// Evaluated without lattice paths, so it is an independent check on the
/// general recursion.
pub fn wt_t_infinity(d: u32) -> Rational {
    wt_t_infinity_table(d).pop().unwrap_or_else(Rational::zero)
}

/// `[T̃_1, …, T̃_dmax]` at infinity.
pub fn wt_t_infinity_table(dmax: u32) -> Vec<Rational> {
    let mut table: Vec<Rational> = Vec::with_capacity(dmax as usize);
    for d in 1..=dmax {
        let mut bracket = inv_factorial(&(factorial(d) * factorial(d) * factorial(d)));
        for parts in partitions(d).filter(|p| p.len() >= 2) {
            let prod: Rational = parts.iter().map(|&s| table[s as usize - 1].clone()).product();
            let total: u32 = parts.iter().map(|&s| 3 * s - 1).sum();
            bracket -= prod * inv_factorial(&(aut_order(&parts) * factorial(total)));
        }
        table.push(bracket * Rational::from_integer(BigInt::from(factorial(3 * d - 1))));
    }
    table
}

/// `T_d = T̃_d / (3d-1)` at infinity.
pub fn t_infinity(d: u32) -> Rational {
    wt_t_infinity(d) / int(i64::from(3 * d - 1))
}

/// A parameter value `a` in `(1, a)`, possibly unbounded above.
#[derive(Clone, Debug, PartialEq)]
pub enum Endpoint {
    Finite(Rational),
    Infinity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Endpoint,
    pub wt_t: Rational,
    /// `T` on the interval, filled when orbit identities are tracked.
    pub t: Option<Rational>,
}

/// Values on either side of a retained breakpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct Breakpoint {
    pub at: Rational,
    pub minus: Rational,
    pub plus: Rational,
    pub t_minus: Option<Rational>,
    pub t_plus: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseTable {
    pub d: u32,
    pub intervals: Vec<Interval>,
    pub breakpoints: Vec<Breakpoint>,
}

impl PiecewiseTable {
    /// Breakpoints where `T̃` itself changes.
    pub fn jumps(&self) -> Vec<Rational> {
        self.breakpoints
            .iter()
            .filter(|b| b.minus != b.plus)
            .map(|b| b.at.clone())
            .collect()
    }

    /// `T̃` on the open interval containing `a`.
    pub fn value_at(&self, a: &Rational) -> Option<&Rational> {
        self.intervals
            .iter()
            .find(|iv| {
                &iv.lo < a
                    && match &iv.hi {
                        Endpoint::Finite(h) => a < h,
                        Endpoint::Infinity => true,
                    }
            })
            .map(|iv| &iv.wt_t)
    }
}

/// Points `a = i/m > 0` with `i + m = 3d - 1`, where the orbit
/// `o_{3d-1}` changes identity without `Γ_{3d-1}` changing.
pub fn orbit_identity_breakpoints(d: u32) -> Vec<Rational> {
    let n = 3 * d - 1;
    let mut out: Vec<Rational> = (1..n).map(|i| Rational::new(i.into(), (n - i).into())).collect();
    out.sort();
    out.dedup();
    out
}

/// Tabulates `T̃_d^{(1,a)}` for `a` in `(lo, hi)`. If `hi > 3d - 1` the last
/// interval is reported as unbounded, since nothing changes past `3d - 1`.
pub fn piecewise_table(d: u32, lo: &Rational, hi: &Rational, refine_orbit_id: bool) -> Result<PiecewiseTable> {
    if d == 0 {
        return Err(Error::InvalidParams("degree must be positive".into()));
    }
    if lo < &Rational::one() || hi <= lo {
        return Err(Error::InvalidParams(format!("need 1 <= lo < hi, got ({lo}, {hi})")));
    }
    let below_hi = |x: &Rational| x < hi;
    let mut cuts: Vec<Rational> = candidate_discontinuities(d, lo).into_iter().filter(below_hi).collect();
    if refine_orbit_id {
        cuts.extend(
            orbit_identity_breakpoints(d)
                .into_iter()
                .filter(|x| x > lo && below_hi(x)),
        );
        cuts.sort();
        cuts.dedup();
    }
    let top = int(i64::from(3 * d - 1));
    let unbounded = hi > &top;

    let eval = |a: &Rational, side: Side| -> Result<(Rational, Option<Rational>)> {
        let sp = Superpotential::new(&Cp2, &SpectrumParams::plane(a.clone(), side)?);
        let v = sp.wt_t(&d);
        let t = if refine_orbit_id { Some(sp.t(&d)?) } else { None };
        Ok((v, t))
    };

    let mut edges = vec![lo.clone()];
    edges.extend(cuts.iter().cloned());
    let mut intervals = Vec::new();
    for (i, left) in edges.iter().enumerate() {
        let right = edges.get(i + 1);
        let sample = match right {
            Some(r) => (left + r) / int(2),
            None if unbounded => left.clone().max(top.clone()) + int(1),
            None => (left + hi) / int(2),
        };
        let (v, t) = eval(&sample, Side::Canonical)?;
        let hi_end = match right {
            Some(r) => Endpoint::Finite(r.clone()),
            None if unbounded => Endpoint::Infinity,
            None => Endpoint::Finite(hi.clone()),
        };
        intervals.push(Interval {
            lo: left.clone(),
            hi: hi_end,
            wt_t: v,
            t,
        });
    }
    let mut breakpoints = Vec::new();
    for b in &cuts {
        let (minus, t_minus) = eval(b, Side::Minus)?;
        let (plus, t_plus) = eval(b, Side::Plus)?;
        breakpoints.push(Breakpoint {
            at: b.clone(),
            minus,
            plus,
            t_minus,
            t_plus,
        });
    }

    // merge neighbours whose values agree across the breakpoint
    let mut merged: Vec<Interval> = Vec::new();
    let mut kept: Vec<Breakpoint> = Vec::new();
    let mut bps = breakpoints.into_iter();
    for iv in intervals {
        match merged.last_mut() {
            Some(prev) => {
                let bp = bps.next().expect("one breakpoint between intervals");
                let same = prev.wt_t == iv.wt_t && prev.t == iv.t && bp.minus == bp.plus && bp.t_minus == bp.t_plus;
                if same {
                    prev.hi = iv.hi;
                } else {
                    kept.push(bp);
                    merged.push(iv);
                }
            }
            None => merged.push(iv),
        }
    }
    let table = PiecewiseTable {
        d,
        intervals: merged,
        breakpoints: kept,
    };
    let allowed = candidate_discontinuities(d, &Rational::zero());
    if let Some(bad) = table.jumps().into_iter().find(|j| !allowed.contains(j)) {
        return Err(Error::Invariant(format!(
            "jump of T̃_{d} at {bad} is not a candidate discontinuity"
        )));
    }
    Ok(table)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenfunRow {
    pub d: u32,
    pub coefficient: Rational,
    pub expected: Rational,
}

impl GenfunRow {
    pub fn passed(&self) -> bool {
        self.coefficient == self.expected
    }
}

/// Coefficients `0..=n` of `f^e` for a truncated power series `f`.
pub fn series_power(f: &[Rational], e: u32, n: usize) -> Vec<Rational> {
    let mul = |x: &[Rational], y: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in x.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        out
    };
    let mut result = vec![Rational::zero(); n + 1];
    result[0] = Rational::one();
    let mut base: Vec<Rational> = f.iter().take(n + 1).cloned().collect();
    base.resize(n + 1, Rational::zero());
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    result
}

/// With `F(x) = 1 + Σ_{d≤dmax} T̃_d x^d` at infinity, compares the `x^d`
/// coefficient of `F^{3d}` with `(3d)!/(d!)³`.
pub fn genfun_check(dmax: u32) -> Vec<GenfunRow> {
    let mut f = vec![Rational::one()];
    f.extend(wt_t_infinity_table(dmax));
    (1..=dmax)
        .map(|d| {
            let coeff = series_power(&f, 3 * d, d as usize)[d as usize].clone();
            let expected = Rational::from_integer(BigInt::from(multinomial(&[d, d, d])));
            GenfunRow {
                d,
                coefficient: coeff,
                expected,
            }
        })
        .collect()
}
