//! The fully rounded model: the L∞ algebra `V` on generators `α_{i,j}`,
//! `β_{i,j}`, the augmentation `ε̃: V → C_o`, and the linear map
//! `Ψ_a: C_a → V`, `o_j ↦ β_{Γ_j}`.
//!
//! `ε̃ ∘ Ψ_a` recovers `ε_a`, which is what makes `ε_a` compatible with
//! cobordism maps.

use std::marker::PhantomData;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::factorial;
use crate::linf::{
    check_homomorphism, check_structure, extend_coderivation, extend_morphism, Abelian, Combination, Generator,
    Morphism, Structure, Word,
};
use crate::orbits::{Spectrum, SpectrumParams};
use crate::scalar::Scalar;
use crate::sft::{DescendantGen, OrbitGen};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VGen {
    /// `α_{i,j}`, `i, j ≥ 1`, odd degree `-1-2i-2j`.
    Alpha(u32, u32),
    /// `β_{i,j}`, `(i, j) ≠ (0, 0)`, even degree `-2-2i-2j`.
    Beta(u32, u32),
}

impl Generator for VGen {
    fn degree(&self) -> i64 {
        match *self {
            VGen::Alpha(i, j) => -1 - 2 * i64::from(i) - 2 * i64::from(j),
            VGen::Beta(i, j) => -2 - 2 * i64::from(i) - 2 * i64::from(j),
        }
    }

    fn is_valid(&self) -> bool {
        match *self {
            VGen::Alpha(i, j) => i >= 1 && j >= 1,
            VGen::Beta(i, j) => i + j >= 1,
        }
    }
}

/// All generators with `i + j ≤ max_total`.
pub fn window(max_total: u32) -> Vec<VGen> {
    let mut out = Vec::new();
    for i in 0..=max_total {
        for j in 0..=max_total - i {
            for g in [VGen::Alpha(i, j), VGen::Beta(i, j)] {
                if g.is_valid() {
                    out.push(g);
                }
            }
        }
    }
    out.sort();
    out
}

/// `V` with `ℓ^1`, `ℓ^2` and `ℓ^{≥3} = 0`.
#[derive(Clone, Copy, Debug)]
pub struct VAlgebra<S> {
    mixed_sign: i64,
    _scalar: PhantomData<fn() -> S>,
}

impl<S: Scalar> Default for VAlgebra<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> VAlgebra<S> {
    pub fn new() -> Self {
        Self {
            mixed_sign: 1,
            _scalar: PhantomData,
        }
    }

    /// `V` with the sign of `ℓ^2(α, β)` flipped; not an L∞ algebra.
    pub fn perturbed() -> Self {
        Self {
            mixed_sign: -1,
            _scalar: PhantomData,
        }
    }

    pub fn ell1(&self, g: VGen) -> Combination<VGen, S> {
        let mut out = Combination::zero();
        if let VGen::Alpha(i, j) = g {
            out.add_term(Word::single(VGen::Beta(i - 1, j)), S::from_i64(i64::from(j)));
            out.add_term(Word::single(VGen::Beta(i, j - 1)), S::from_i64(-i64::from(i)));
        }
        out
    }

    /// `ℓ^2(x, y)` with `x ≤ y` in canonical order.
    pub fn ell2(&self, x: VGen, y: VGen) -> Combination<VGen, S> {
        let det = |i: u32, j: u32, k: u32, l: u32| i64::from(i) * i64::from(l) - i64::from(j) * i64::from(k);
        match (x, y) {
            (VGen::Alpha(i, j), VGen::Alpha(k, l)) => {
                Combination::generator(VGen::Alpha(i + k, j + l), S::from_i64(det(i, j, k, l)))
            }
            (VGen::Alpha(i, j), VGen::Beta(k, l)) => {
                Combination::generator(VGen::Beta(i + k, j + l), S::from_i64(self.mixed_sign * det(i, j, k, l)))
            }
            (VGen::Beta(..), VGen::Alpha(..)) => self.ell2(y, x),
            (VGen::Beta(..), VGen::Beta(..)) => Combination::zero(),
        }
    }
}

impl<S: Scalar> Structure<S> for VAlgebra<S> {
    type Gen = VGen;

    fn ell(&self, word: &Word<VGen>) -> Result<Combination<VGen, S>> {
        word.validate()?;
        Ok(match word.letters() {
            [g] => self.ell1(*g),
            [x, y] => self.ell2(*x, *y),
            _ => Combination::zero(),
        })
    }
}

/// `ε̃^k(β_{i_1,j_1},…,β_{i_k,j_k}) = q_{Σi+Σj+k-1} / ((Σi)!(Σj)!)`, zero on
/// any word containing an `α`.
#[derive(Clone, Copy, Debug, Default)]
pub struct TildeEpsilon<S>(PhantomData<fn() -> S>);

impl<S: Scalar> TildeEpsilon<S> {
    pub fn new() -> Self {
        Self(PhantomData)
    }
}

impl<S: Scalar> Morphism<S> for TildeEpsilon<S> {
    type Source = VGen;
    type Target = DescendantGen;

    fn level(&self, word: &Word<VGen>) -> Result<Combination<DescendantGen, S>> {
        word.validate()?;
        let (mut si, mut sj) = (0u32, 0u32);
        for g in word.letters() {
            match *g {
                VGen::Alpha(..) => return Ok(Combination::zero()),
                VGen::Beta(i, j) => {
                    si += i;
                    sj += j;
                }
            }
        }
        let q = DescendantGen(si + sj + word.len() as u32 - 1);
        let c = Rational::new(1.into(), BigInt::from(factorial(si) * factorial(sj)));
        Ok(Combination::generator(q, S::from_rational(&c)))
    }
}

/// `Ψ_a`: `Ψ^1(o_j) = β_{Γ_j}` and `Ψ^{≥2} = 0`. Four-dimensional only.
#[derive(Clone, Debug)]
pub struct Psi<S> {
    spectrum: Spectrum,
    _scalar: PhantomData<fn() -> S>,
}

pub fn psi_map<S: Scalar>(p: &SpectrumParams) -> Result<Psi<S>> {
    if p.dim() != 2 {
        return Err(Error::OutOfScope(format!(
            "the rounded model is only defined in dimension four, got {} components",
            p.dim()
        )));
    }
    Ok(Psi {
        spectrum: Spectrum::new(p.clone()),
        _scalar: PhantomData,
    })
}

impl<S: Scalar> Morphism<S> for Psi<S> {
    type Source = OrbitGen;
    type Target = VGen;

    fn level(&self, word: &Word<OrbitGen>) -> Result<Combination<VGen, S>> {
        word.validate()?;
        Ok(match word.letters() {
            [o] => {
                let g = self.spectrum.gamma(o.0 as usize);
                Combination::generator(VGen::Beta(g[0], g[1]), S::one())
            }
            _ => Combination::zero(),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AugReport {
    pub aug_words: usize,
    pub structure_words: usize,
    pub homomorphism_words: usize,
    pub failure: Option<String>,
}

impl AugReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Words `α ⊙ β_1 ⊙ ⋯ ⊙ β_m` with `m ≤ max_len - 1` over `gens`.
fn one_alpha_words(gens: &[VGen], max_len: usize) -> Vec<Word<VGen>> {
    let alphas: Vec<VGen> = gens.iter().copied().filter(|g| matches!(g, VGen::Alpha(..))).collect();
    let betas: Vec<VGen> = gens.iter().copied().filter(|g| matches!(g, VGen::Beta(..))).collect();
    let mut tails: Vec<Vec<VGen>> = vec![Vec::new()];
    let mut frontier: Vec<(usize, Vec<VGen>)> = vec![(0, Vec::new())];
    for _ in 1..max_len {
        let mut next = Vec::new();
        for (from, cur) in &frontier {
            for (i, b) in betas.iter().enumerate().skip(*from) {
                let mut w = cur.clone();
                w.push(*b);
                tails.push(w.clone());
                next.push((i, w));
            }
        }
        frontier = next;
    }
    let mut out = Vec::with_capacity(alphas.len() * tails.len());
    for a in &alphas {
        for t in &tails {
            let mut letters = vec![*a];
            letters.extend_from_slice(t);
            out.push(Word::from_letters(letters).expect("one odd letter").0);
        }
    }
    out
}

/// Checks that `ε̃` is an L∞ homomorphism on the window `i + j ≤ max_total`:
/// `π_1 ε̃̂ ℓ̂_V = 0` on every word with one `α` and at most `max_len - 1`
/// `β`'s; `ℓ̂_V ∘ ℓ̂_V = 0` up to length `max_len.min(3)`; and the full
/// bar-level equation up to length `max_len.min(3)`.
pub fn verify_aug_with(v: &VAlgebra<Rational>, max_total: u32, max_len: usize) -> Result<AugReport> {
    if max_total == 0 || max_len == 0 {
        return Err(Error::InvalidParams("window and length bounds must be positive".into()));
    }
    let gens = window(max_total);
    let eps = TildeEpsilon::<Rational>::new();
    let mut report = AugReport::default();
    for w in one_alpha_words(&gens, max_len) {
        let image = extend_coderivation(v, &w)?;
        let mut total = Combination::zero();
        for (u, c) in image.iter() {
            total.add_scaled(&eps.level(u)?, c);
        }
        report.aug_words += 1;
        if !total.is_zero() {
            report.failure = Some(format!("π1 ε̃̂ ℓ̂ ({w:?}) = {total:?}"));
            return Ok(report);
        }
    }
    let short = max_len.min(3);
    let structure = check_structure(v, &gens, short)?;
    report.structure_words = structure.checked;
    if let Some((w, c)) = structure.violation {
        report.failure = Some(format!("ℓ̂ ℓ̂ ({w:?}) = {c:?}"));
        return Ok(report);
    }
    let hom = check_homomorphism(&eps, v, &Abelian::<DescendantGen>::new(), &gens, short)?;
    report.homomorphism_words = hom.checked;
    if let Some((w, c)) = hom.violation {
        report.failure = Some(format!("ε̃̂ ℓ̂ − ℓ̂ ε̃̂ ({w:?}) = {c:?}"));
    }
    Ok(report)
}

pub fn verify_aug(max_total: u32, max_len: usize) -> Result<AugReport> {
    verify_aug_with(&VAlgebra::new(), max_total, max_len)
}

/// First word over `o_1..o_n` of length `≤ max_len` on which `ε̃ ∘ Ψ_a`
/// and `ε_a` differ.
pub fn psi_mismatch(p: &SpectrumParams, n: u32, max_len: usize) -> Result<Option<Word<OrbitGen>>> {
    let psi = psi_map::<Rational>(p)?;
    let eps_v = TildeEpsilon::<Rational>::new();
    let eps = crate::sft::epsilon::<Rational>(p);
    let gens: Vec<OrbitGen> = (1..=n).map(OrbitGen).collect();
    for w in crate::linf::words_up_to(&gens, max_len) {
        let mut lhs = Combination::zero();
        for (u, c) in extend_morphism(&psi, &w)?.iter() {
            lhs.add_scaled(&eps_v.level(u)?, c);
        }
        if lhs != eps.level(&w)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::orbits::Side;

    type C = Combination<VGen, Rational>;

    fn wd(letters: Vec<VGen>) -> Word<VGen> {
        Word::from_letters(letters).unwrap().0
    }

    #[test]
    fn ell_examples() {
        let v = VAlgebra::<Rational>::new();
        let mut expected = C::generator(VGen::Beta(0, 1), int(1));
        expected.add_term(Word::single(VGen::Beta(1, 0)), int(-1));
        assert_eq!(v.ell1(VGen::Alpha(1, 1)), expected);
        assert!(v.ell2(VGen::Alpha(1, 1), VGen::Alpha(2, 2)).is_zero());
        assert!(v.ell2(VGen::Beta(1, 0), VGen::Beta(0, 1)).is_zero());
    }

    #[test]
    fn coderivation_example() {
        let v = VAlgebra::<Rational>::new();
        let got = extend_coderivation(&v, &wd(vec![VGen::Alpha(1, 1), VGen::Beta(1, 0)])).unwrap();
        let mut expected = C::from_letters(vec![VGen::Beta(0, 1), VGen::Beta(1, 0)], int(1));
        expected.add_assign(&C::from_letters(vec![VGen::Beta(1, 0), VGen::Beta(1, 0)], int(-1)));
        // ℓ^2(α_{1,1}, β_{1,0}) = (1·0 − 1·1) β_{2,1}
        expected.add_assign(&C::generator(VGen::Beta(2, 1), int(-1)));
        assert_eq!(got, expected);
    }

    #[test]
    fn odd_square_is_zero() {
        assert!(Word::from_letters(vec![VGen::Alpha(1, 2), VGen::Alpha(1, 2)]).is_none());
    }

    #[test]
    fn tilde_epsilon_examples() {
        let e = TildeEpsilon::<Rational>::new();
        assert_eq!(
            e.level(&wd(vec![VGen::Beta(1, 0)])).unwrap(),
            Combination::generator(DescendantGen(1), int(1))
        );
        assert_eq!(
            e.level(&wd(vec![VGen::Beta(1, 0), VGen::Beta(0, 1)])).unwrap(),
            Combination::generator(DescendantGen(3), int(1))
        );
        assert!(e
            .level(&wd(vec![VGen::Alpha(1, 1), VGen::Beta(1, 0)]))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn small_window_passes_and_control_fails() {
        assert!(verify_aug(4, 3).unwrap().passed());
        assert!(!verify_aug_with(&VAlgebra::perturbed(), 4, 3).unwrap().passed());
    }

    #[test]
    fn psi_examples() {
        let p = SpectrumParams::plane(rat(3, 2), Side::Canonical).unwrap();
        let psi = psi_map::<Rational>(&p).unwrap();
        assert_eq!(
            psi.level(&Word::single(OrbitGen(2))).unwrap(),
            Combination::generator(VGen::Beta(1, 1), int(1))
        );
        let p = SpectrumParams::plane(int(3), Side::Canonical).unwrap();
        assert_eq!(
            psi_map::<Rational>(&p)
                .unwrap()
                .level(&Word::single(OrbitGen(2)))
                .unwrap(),
            Combination::generator(VGen::Beta(2, 0), int(1))
        );
        let p3 = SpectrumParams::canonical(vec![int(1), int(2), int(3)]).unwrap();
        assert!(psi_map::<Rational>(&p3).is_err());
    }

    #[test]
    fn psi_recovers_epsilon() {
        let p = SpectrumParams::plane(rat(3, 2), Side::Canonical).unwrap();
        assert_eq!(psi_mismatch(&p, 5, 3).unwrap(), None);
    }
}
