//! The ellipsoid algebra `C_a`, the point algebra `C_o`, the stationary
//! descendant augmentation `ε_a: C_a → C_o`, its inverse `η_a`, and cobordism
//! maps `Ξ^{a'}_a = η_a ∘ ε_{a'}`.
//!
//! Both algebras are abelian, so every morphism between them is determined by
//! its level maps alone and no homotopy data is needed.

use std::collections::BTreeMap;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{aut_order, lattice_sum, vec_factorial};
use crate::linf::{compose, extend_morphism, invert, Combination, Composite, Generator, Inverse, Morphism, Word};
use crate::orbits::{Spectrum, SpectrumParams};
use crate::scalar::Scalar;
use crate::Rational;

/// `o_k`, the generator of `C_a` for the k-th orbit; `|o_k| = -2-2k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitGen(pub u32);

/// `q_k`, the generator of `C_o`; `|q_k| = -2-2k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DescendantGen(pub u32);

impl Generator for OrbitGen {
    fn degree(&self) -> i64 {
        -2 - 2 * i64::from(self.0)
    }
    fn is_valid(&self) -> bool {
        self.0 >= 1
    }
}

impl Generator for DescendantGen {
    fn degree(&self) -> i64 {
        -2 - 2 * i64::from(self.0)
    }
    fn is_valid(&self) -> bool {
        self.0 >= 1
    }
}

/// Output index of a level map: `j = i_1 + ⋯ + i_k + k - 1`.
pub fn target_index(indices: &[u32]) -> u32 {
    indices.iter().sum::<u32>() + indices.len() as u32 - 1
}

fn orbit_indices(w: &Word<OrbitGen>) -> Vec<u32> {
    w.letters().iter().map(|o| o.0).collect()
}

/// The augmentation `ε_a`:
/// `ε^k(o_{i_1},…,o_{i_k}) = q_{Σi+k-1} / (Γ_{i_1} + ⋯ + Γ_{i_k})!`.
#[derive(Clone, Debug)]
pub struct Epsilon<S> {
    spectrum: Spectrum,
    _scalar: PhantomData<fn() -> S>,
}

pub fn epsilon<S: Scalar>(p: &SpectrumParams) -> Epsilon<S> {
    Epsilon {
        spectrum: Spectrum::new(p.clone()),
        _scalar: PhantomData,
    }
}

impl<S: Scalar> Epsilon<S> {
    pub fn params(&self) -> &SpectrumParams {
        self.spectrum.params()
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// The exact coefficient `1/(ΣΓ_{i_s})!`.
    pub fn coefficient(&self, indices: &[u32]) -> Rational {
        let gammas: Vec<_> = indices.iter().map(|&i| self.spectrum.gamma(i as usize)).collect();
        let denom = vec_factorial(&lattice_sum(&gammas));
        Rational::new(BigInt::one(), BigInt::from(denom))
    }
}

impl<S: Scalar> Morphism<S> for Epsilon<S> {
    type Source = OrbitGen;
    type Target = DescendantGen;

    fn level(&self, word: &Word<OrbitGen>) -> Result<Combination<DescendantGen, S>> {
        word.validate()?;
        let idx = orbit_indices(word);
        let c = self.coefficient(&idx);
        Ok(Combination::generator(
            DescendantGen(target_index(&idx)),
            S::from_rational(&c),
        ))
    }

    fn linear_preimage(&self, t: &DescendantGen) -> Option<(OrbitGen, S)> {
        (t.0 >= 1).then(|| (OrbitGen(t.0), S::from_rational(&self.coefficient(&[t.0]))))
    }
}

/// `η_a`, the L∞ inverse of `ε_a` up to word length `bound`.
pub type Eta<S> = Inverse<Epsilon<S>, S>;

pub fn eta<S: Scalar>(p: &SpectrumParams, bound: usize) -> Eta<S> {
    invert(epsilon(p), bound)
}

/// `Ξ^{a'}_a = η_a ∘ ε_{a'}: C_{a'} → C_a`.
pub type Xi<S> = Composite<Eta<S>, Epsilon<S>, S>;

pub fn xi<S: Scalar>(source: &SpectrumParams, target: &SpectrumParams, bound: usize) -> Xi<S> {
    compose(eta(target, bound), epsilon(source), bound)
}

/// Checks the index constraint `j = Σi + k - 1` on every term of `Φ^k(w)`
/// for a morphism between ellipsoid or point algebras.
pub fn respects_index_rule<M, T>(m: &M, w: &Word<OrbitGen>, index_of: impl Fn(&T) -> u32) -> Result<bool>
where
    M: Morphism<Rational, Source = OrbitGen, Target = T>,
    T: Generator,
{
    let j = target_index(&orbit_indices(w));
    Ok(m.level(w)?
        .iter()
        .all(|(u, _)| u.len() == 1 && index_of(&u.letters()[0]) == j))
}

/// The Maurer–Cartan element `m_{M,A} = T̃ · o_{c1(A)-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct McElement<C> {
    pub class: C,
    pub coefficient: Rational,
    pub orbit_index: u32,
}

impl<C> McElement<C> {
    pub fn as_combination(&self) -> Combination<OrbitGen, Rational> {
        Combination::generator(OrbitGen(self.orbit_index), self.coefficient.clone())
    }
}

/// `exp_A(m) = Σ_{A = A_1+⋯+A_k} (1/|Aut|) m_{A_1} ⊙ ⋯ ⊙ m_{A_k}`, summed over
/// the unordered decompositions supplied (each as a sorted list of classes).
pub fn exp_mc<C, D, F>(decompositions: D, mc: F) -> Combination<OrbitGen, Rational>
where
    C: Ord + Clone,
    D: IntoIterator<Item = Vec<C>>,
    F: Fn(&C) -> McElement<C>,
{
    let mut out = Combination::zero();
    for parts in decompositions {
        let mut cache: BTreeMap<C, Combination<OrbitGen, Rational>> = BTreeMap::new();
        let mut term: Option<Combination<OrbitGen, Rational>> = None;
        for c in &parts {
            let m = cache.entry(c.clone()).or_insert_with(|| mc(c).as_combination()).clone();
            term = Some(match term {
                None => m,
                Some(t) => t.odot(&m),
            });
        }
        let Some(term) = term else { continue };
        let weight = Rational::new(BigInt::one(), BigInt::from(aut_order(&parts)));
        out.add_scaled(&term, &weight);
    }
    out
}

/// `π_1 ε̂_a(x)` as a single coefficient on `q_j`.
pub fn augment_to(p: &SpectrumParams, x: &Combination<OrbitGen, Rational>, j: u32) -> Result<Rational> {
    let eps = epsilon::<Rational>(p);
    let mut total = Rational::from_integer(0.into());
    for (w, c) in x.iter() {
        total += eps.level(w)?.coefficient_of(&DescendantGen(j)) * c;
    }
    Ok(total)
}

/// Applies `Φ̂` to every word of `x` and keeps all lengths.
pub fn push_forward<M>(m: &M, x: &Combination<OrbitGen, Rational>) -> Result<Combination<OrbitGen, Rational>>
where
    M: Morphism<Rational, Source = OrbitGen, Target = OrbitGen> + ?Sized,
{
    let mut out = Combination::zero();
    for (w, c) in x.iter() {
        out.add_scaled(&extend_morphism(m, w)?, c);
    }
    Ok(out)
}

/// Rejects a morphism whose level-one part is not the identity on `o_1..o_n`.
pub fn ensure_linear_identity<M>(m: &M, n: u32) -> Result<()>
where
    M: Morphism<Rational, Source = OrbitGen, Target = OrbitGen> + ?Sized,
{
    for i in 1..=n {
        let img = m.level(&Word::single(OrbitGen(i)))?;
        if img != Combination::generator(OrbitGen(i), Rational::one()) {
            return Err(Error::Invariant(format!(
                "level one is not the identity at o_{i}: {img:?}"
            )));
        }
    }
    Ok(())
}
