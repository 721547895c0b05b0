//! L∞ algebras and homomorphisms over a [`Scalar`] field, evaluated lazily on
//! the reduced symmetric coalgebra.
//!
//! Generators are typed keys carrying their own degree. A [`Word`] is a
//! nonempty multiset of generators stored in sorted order; all signs live in
//! [`Combination`] coefficients. Level maps (`ℓ^k`, `Φ^k`) are rules
//! evaluated on canonical words, and everything that extends them to the bar
//! complex is computed on demand with memo tables, since the generator
//! families involved are infinite.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Debug};
use std::hash::Hash;
use std::marker::PhantomData;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::exact::{koszul_sign, ordered_shuffles, partitions, shuffles, Permutation};
use crate::scalar::Scalar;
use crate::Rational;

pub trait Generator: Clone + Ord + Hash + Debug + Send + Sync + 'static {
    fn degree(&self) -> i64;

    /// Whether the key names an actual basis element.
    fn is_valid(&self) -> bool {
        true
    }

    fn is_odd(&self) -> bool {
        self.degree().rem_euclid(2) == 1
    }
}

fn check_valid<K: Generator>(k: &K) -> Result<()> {
    if k.is_valid() {
        Ok(())
    } else {
        Err(Error::UnknownGenerator(format!("{k:?}")))
    }
}

/// A nonempty symmetric word `v_1 ⊙ ⋯ ⊙ v_k` in canonical (sorted) order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word<K>(Vec<K>);

impl<K: Generator> Word<K> {
    pub fn single(k: K) -> Self {
        Self(vec![k])
    }

    /// Sorts `letters` into canonical order. Returns the Koszul sign of the
    /// reordering, or `None` if the word vanishes (an odd letter repeated).
    pub fn from_letters(mut letters: Vec<K>) -> Option<(Self, i32)> {
        assert!(!letters.is_empty(), "words are nonempty");
        let mut sign = 1;
        for i in 1..letters.len() {
            let mut j = i;
            while j > 0 && letters[j - 1] > letters[j] {
                if letters[j - 1].is_odd() && letters[j].is_odd() {
                    sign = -sign;
                }
                letters.swap(j - 1, j);
                j -= 1;
            }
        }
        if letters.windows(2).any(|w| w[0] == w[1] && w[0].is_odd()) {
            return None;
        }
        Some((Self(letters), sign))
    }

    /// Builds a word from letters already in canonical order.
    fn from_sorted(letters: Vec<K>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] <= w[1]));
        Self(letters)
    }

    pub fn letters(&self) -> &[K] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(Generator::degree).sum()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.0.iter().map(Generator::degree).collect()
    }

    /// The sub-word at the given (increasing) positions.
    fn pick(&self, positions: &[usize]) -> Self {
        Self::from_sorted(positions.iter().map(|&i| self.0[i].clone()).collect())
    }

    pub fn validate(&self) -> Result<()> {
        self.0.iter().try_for_each(check_valid)
    }
}

impl<K: Debug> Debug for Word<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "⊙")?;
            }
            write!(f, "{k:?}")?;
        }
        Ok(())
    }
}

/// A finite linear combination of words; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct Combination<K, S> {
    terms: BTreeMap<Word<K>, S>,
}

impl<K: Generator, S: Scalar> Default for Combination<K, S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Generator, S: Scalar> Combination<K, S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn word(w: Word<K>, c: S) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    pub fn generator(k: K, c: S) -> Self {
        Self::word(Word::single(k), c)
    }

    /// The canonical form of `c · l_1 ⊙ ⋯ ⊙ l_k`.
    pub fn from_letters(letters: Vec<K>, c: S) -> Self {
        match Word::from_letters(letters) {
            Some((w, sign)) => Self::word(w, c * S::from_i64(i64::from(sign))),
            None => Self::zero(),
        }
    }

    pub fn add_term(&mut self, w: Word<K>, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x.clone() * c.clone());
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.add_scaled(other, &S::one());
    }

    pub fn scaled(&self, c: &S) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-S::one())
    }

    /// Graded-symmetric product `self ⊙ other`.
    pub fn odot(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let letters: Vec<K> = w1.0.iter().chain(&w2.0).cloned().collect();
                if let Some((w, sign)) = Word::from_letters(letters) {
                    out.add_term(w, c1.clone() * c2.clone() * S::from_i64(i64::from(sign)));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word<K>) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of the length-one word `k`.
    pub fn coefficient_of(&self, k: &K) -> S {
        self.coefficient(&Word::single(k.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word<K>, &S)> {
        self.terms.iter()
    }

    /// The part made of words of length `len`.
    pub fn project(&self, len: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == len)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// Common degree of all terms, or `None` if mixed or zero.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(Word::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn map_coefficients<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Combination<K, T> {
        let mut out = Combination::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }
}

impl<K: Debug, S: Debug> Debug for Combination<K, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})·{w:?}")?;
        }
        Ok(())
    }
}

/// An L∞ structure given by its level maps `ℓ^k`, each of degree `+1`.
pub trait Structure<S: Scalar> {
    type Gen: Generator;

    /// `ℓ^k` on a canonical word of length `k`; the result has length one.
    fn ell(&self, word: &Word<Self::Gen>) -> Result<Combination<Self::Gen, S>>;
}

/// The abelian structure (all `ℓ^k = 0`) on a generator family.
#[derive(Clone, Copy, Debug, Default)]
pub struct Abelian<K>(PhantomData<K>);

impl<K> Abelian<K> {
    pub fn new() -> Self {
        Self(PhantomData)
    }
}

impl<K: Generator, S: Scalar> Structure<S> for Abelian<K> {
    type Gen = K;
    fn ell(&self, word: &Word<K>) -> Result<Combination<K, S>> {
        word.validate()?;
        Ok(Combination::zero())
    }
}

/// An L∞ homomorphism given by its degree-0 level maps `Φ^k`.
pub trait Morphism<S: Scalar> {
    type Source: Generator;
    type Target: Generator;

    /// `Φ^k` on a canonical word of length `k`; the result has length one.
    fn level(&self, word: &Word<Self::Source>) -> Result<Combination<Self::Target, S>>;

    /// If `Φ^1(x) = c·t` for a single basis element `x`, returns `(x, c)`.
    /// Morphisms whose linear part is diagonal in this sense can be inverted.
    fn linear_preimage(&self, _target: &Self::Target) -> Option<(Self::Source, S)> {
        None
    }
}

impl<S: Scalar, M: Morphism<S> + ?Sized> Morphism<S> for &M {
    type Source = M::Source;
    type Target = M::Target;
    fn level(&self, word: &Word<M::Source>) -> Result<Combination<M::Target, S>> {
        (**self).level(word)
    }
    fn linear_preimage(&self, t: &M::Target) -> Option<(M::Source, S)> {
        (**self).linear_preimage(t)
    }
}

impl<S: Scalar, M: Morphism<S> + ?Sized> Morphism<S> for Arc<M> {
    type Source = M::Source;
    type Target = M::Target;
    fn level(&self, word: &Word<M::Source>) -> Result<Combination<M::Target, S>> {
        (**self).level(word)
    }
    fn linear_preimage(&self, t: &M::Target) -> Option<(M::Source, S)> {
        (**self).linear_preimage(t)
    }
}

impl<S: Scalar, M: Morphism<S> + ?Sized> Morphism<S> for Box<M> {
    type Source = M::Source;
    type Target = M::Target;
    fn level(&self, word: &Word<M::Source>) -> Result<Combination<M::Target, S>> {
        (**self).level(word)
    }
    fn linear_preimage(&self, t: &M::Target) -> Option<(M::Source, S)> {
        (**self).linear_preimage(t)
    }
}

/// The identity homomorphism.
#[derive(Clone, Copy, Debug, Default)]
pub struct Identity<K>(PhantomData<K>);

impl<K> Identity<K> {
    pub fn new() -> Self {
        Self(PhantomData)
    }
}

impl<K: Generator, S: Scalar> Morphism<S> for Identity<K> {
    type Source = K;
    type Target = K;
    fn level(&self, word: &Word<K>) -> Result<Combination<K, S>> {
        word.validate()?;
        Ok(if word.len() == 1 {
            Combination::word(word.clone(), S::one())
        } else {
            Combination::zero()
        })
    }
    fn linear_preimage(&self, t: &K) -> Option<(K, S)> {
        Some((t.clone(), S::one()))
    }
}

type PreimageFn<A, B, S> = Box<dyn Fn(&B) -> Option<(A, S)> + Send + Sync>;

/// A homomorphism defined by closures.
pub struct FnMorphism<A, B, S, F> {
    rule: F,
    preimage: Option<PreimageFn<A, B, S>>,
    _marker: PhantomData<fn(A) -> B>,
}

impl<A, B, S, F> FnMorphism<A, B, S, F>
where
    A: Generator,
    B: Generator,
    S: Scalar,
    F: Fn(&Word<A>) -> Combination<B, S>,
{
    pub fn new(rule: F) -> Self {
        Self {
            rule,
            preimage: None,
            _marker: PhantomData,
        }
    }

    pub fn with_preimage(mut self, f: impl Fn(&B) -> Option<(A, S)> + Send + Sync + 'static) -> Self {
        self.preimage = Some(Box::new(f));
        self
    }
}

impl<A, B, S, F> Morphism<S> for FnMorphism<A, B, S, F>
where
    A: Generator,
    B: Generator,
    S: Scalar,
    F: Fn(&Word<A>) -> Combination<B, S>,
{
    type Source = A;
    type Target = B;
    fn level(&self, word: &Word<A>) -> Result<Combination<B, S>> {
        word.validate()?;
        Ok((self.rule)(word))
    }
    fn linear_preimage(&self, t: &B) -> Option<(A, S)> {
        self.preimage.as_ref().and_then(|f| f(t))
    }
}

/// An L∞ structure defined by a closure.
pub struct FnStructure<K, S, F> {
    rule: F,
    _marker: PhantomData<fn(K) -> S>,
}

impl<K, S, F> FnStructure<K, S, F>
where
    K: Generator,
    S: Scalar,
    F: Fn(&Word<K>) -> Combination<K, S>,
{
    pub fn new(rule: F) -> Self {
        Self {
            rule,
            _marker: PhantomData,
        }
    }
}

impl<K, S, F> Structure<S> for FnStructure<K, S, F>
where
    K: Generator,
    S: Scalar,
    F: Fn(&Word<K>) -> Combination<K, S>,
{
    type Gen = K;
    fn ell(&self, word: &Word<K>) -> Result<Combination<K, S>> {
        word.validate()?;
        Ok((self.rule)(word))
    }
}

/// `ℓ̂(v_1 ⊙ ⋯ ⊙ v_k) = Σ_i Σ_{σ ∈ Sh(i,k-i)} ± ℓ^i(v_σ(1..i)) ⊙ v_σ(i+1..k)`.
pub fn extend_coderivation<S, L>(l: &L, w: &Word<L::Gen>) -> Result<Combination<L::Gen, S>>
where
    S: Scalar,
    L: Structure<S> + ?Sized,
{
    w.validate()?;
    let k = w.len();
    let degrees = w.degrees();
    let mut out = Combination::zero();
    for i in 1..=k {
        let sizes: Vec<usize> = if i == k { vec![k] } else { vec![i, k - i] };
        for sigma in shuffles(&sizes) {
            let sign = S::from_i64(i64::from(koszul_sign(&sigma, &degrees)));
            let img = sigma.images();
            let head = l.ell(&w.pick(&img[..i]))?;
            let term = if i == k {
                head
            } else {
                head.odot(&Combination::word(w.pick(&img[i..]), S::one()))
            };
            out.add_scaled(&term, &sign);
        }
    }
    debug_assert!(
        out.iter().all(|(u, _)| u.degree() == w.degree() + 1),
        "coderivation must raise degree by one"
    );
    Ok(out)
}

pub fn extend_coderivation_linear<S, L>(l: &L, c: &Combination<L::Gen, S>) -> Result<Combination<L::Gen, S>>
where
    S: Scalar,
    L: Structure<S> + ?Sized,
{
    let mut out = Combination::zero();
    for (w, x) in c.iter() {
        out.add_scaled(&extend_coderivation(l, w)?, x);
    }
    Ok(out)
}

/// Block-size lists `k_1 ≤ ⋯ ≤ k_s` summing to `k`.
fn sorted_block_sizes(k: usize) -> impl Iterator<Item = Vec<usize>> {
    partitions(k as u32).map(|p| p.into_iter().rev().map(|x| x as usize).collect())
}

/// `Φ̂(v_1 ⊙ ⋯ ⊙ v_k) = Σ_{k_1≤⋯≤k_s} Σ_{σ ∈ ovl Sh} ± Φ^{k_1}(…) ⊙ ⋯ ⊙ Φ^{k_s}(…)`.
pub fn extend_morphism<S, F>(f: &F, w: &Word<F::Source>) -> Result<Combination<F::Target, S>>
where
    S: Scalar,
    F: Morphism<S> + ?Sized,
{
    w.validate()?;
    let degrees = w.degrees();
    let mut out = Combination::zero();
    for sizes in sorted_block_sizes(w.len()) {
        for sigma in ordered_shuffles(&sizes) {
            let term = apply_blocks(f, w, &sigma, &sizes)?;
            if term.is_zero() {
                continue;
            }
            let sign = S::from_i64(i64::from(koszul_sign(&sigma, &degrees)));
            out.add_scaled(&term, &sign);
        }
    }
    debug_assert!(
        out.iter().all(|(u, _)| u.degree() == w.degree()),
        "homomorphisms preserve degree"
    );
    Ok(out)
}

fn apply_blocks<S, F>(
    f: &F,
    w: &Word<F::Source>,
    sigma: &Permutation,
    sizes: &[usize],
) -> Result<Combination<F::Target, S>>
where
    S: Scalar,
    F: Morphism<S> + ?Sized,
{
    let mut acc: Option<Combination<F::Target, S>> = None;
    for block in sigma.blocks(sizes) {
        let part = f.level(&w.pick(block))?;
        if part.is_zero() {
            return Ok(Combination::zero());
        }
        acc = Some(match acc {
            None => part,
            Some(a) => a.odot(&part),
        });
    }
    Ok(acc.unwrap_or_default())
}

/// `Φ̂` applied to a linear combination.
pub fn apply_hat<S, F>(f: &F, c: &Combination<F::Source, S>) -> Result<Combination<F::Target, S>>
where
    S: Scalar,
    F: Morphism<S> + ?Sized,
{
    let mut out = Combination::zero();
    for (w, x) in c.iter() {
        out.add_scaled(&extend_morphism(f, w)?, x);
    }
    Ok(out)
}

type MemoTable<A, B, S> = RwLock<HashMap<Word<A>, Combination<B, S>>>;

fn memo_get<A: Generator, B: Generator, S: Scalar>(
    memo: &MemoTable<A, B, S>,
    w: &Word<A>,
) -> Option<Combination<B, S>> {
    memo.read().expect("memo lock poisoned").get(w).cloned()
}

fn memo_put<A: Generator, B: Generator, S: Scalar>(memo: &MemoTable<A, B, S>, w: &Word<A>, value: &Combination<B, S>) {
    memo.write()
        .expect("memo lock poisoned")
        .entry(w.clone())
        .or_insert_with(|| value.clone());
}

/// Caches the level maps of a morphism.
pub struct Cached<M: Morphism<S>, S: Scalar> {
    inner: M,
    memo: MemoTable<M::Source, M::Target, S>,
}

impl<M: Morphism<S>, S: Scalar> Cached<M, S> {
    pub fn new(inner: M) -> Self {
        Self {
            inner,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }
}

impl<M: Morphism<S>, S: Scalar> Morphism<S> for Cached<M, S> {
    type Source = M::Source;
    type Target = M::Target;
    fn level(&self, word: &Word<M::Source>) -> Result<Combination<M::Target, S>> {
        if let Some(v) = memo_get(&self.memo, word) {
            return Ok(v);
        }
        let v = self.inner.level(word)?;
        memo_put(&self.memo, word, &v);
        Ok(v)
    }
    fn linear_preimage(&self, t: &M::Target) -> Option<(M::Source, S)> {
        self.inner.linear_preimage(t)
    }
}

/// `G ∘ F`, with level maps defined up to a word-length bound.
pub struct Composite<G, F, S>
where
    S: Scalar,
    F: Morphism<S>,
    G: Morphism<S, Source = F::Target>,
{
    outer: G,
    inner: F,
    bound: usize,
    memo: MemoTable<F::Source, G::Target, S>,
}

/// `(G ∘ F)^k = π_1 ∘ Ĝ ∘ F̂` restricted to length `k ≤ bound`.
pub fn compose<S, G, F>(outer: G, inner: F, bound: usize) -> Composite<G, F, S>
where
    S: Scalar,
    F: Morphism<S>,
    G: Morphism<S, Source = F::Target>,
{
    assert!(bound >= 1, "composition bound must be positive");
    Composite {
        outer,
        inner,
        bound,
        memo: RwLock::new(HashMap::new()),
    }
}

impl<G, F, S> Composite<G, F, S>
where
    S: Scalar,
    F: Morphism<S>,
    G: Morphism<S, Source = F::Target>,
{
    pub fn bound(&self) -> usize {
        self.bound
    }
    pub fn outer(&self) -> &G {
        &self.outer
    }
    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<G, F, S> Morphism<S> for Composite<G, F, S>
where
    S: Scalar,
    F: Morphism<S>,
    G: Morphism<S, Source = F::Target>,
{
    type Source = F::Source;
    type Target = G::Target;

    fn level(&self, word: &Word<F::Source>) -> Result<Combination<G::Target, S>> {
        if word.len() > self.bound {
            return Err(Error::BoundExceeded {
                len: word.len(),
                bound: self.bound,
            });
        }
        if let Some(v) = memo_get(&self.memo, word) {
            return Ok(v);
        }
        let mid = extend_morphism(&self.inner, word)?;
        let mut out = Combination::zero();
        for (u, c) in mid.iter() {
            out.add_scaled(&self.outer.level(u)?, c);
        }
        memo_put(&self.memo, word, &out);
        Ok(out)
    }

    fn linear_preimage(&self, t: &G::Target) -> Option<(F::Source, S)> {
        let (mid, c2) = self.outer.linear_preimage(t)?;
        let (src, c1) = self.inner.linear_preimage(&mid)?;
        Some((src, c1 * c2))
    }
}

/// The inverse of a homomorphism with diagonal linear part, up to a bound.
pub struct Inverse<F, S>
where
    S: Scalar,
    F: Morphism<S>,
{
    forward: F,
    bound: usize,
    memo: MemoTable<F::Target, F::Source, S>,
}

/// Level-by-level inverse: `H^1 = (Φ^1)^{-1}` and, for `k ≥ 2`,
/// `H^k(y_1,…,y_k) = -Σ_{s<k} H^s(π_s Φ̂(H^1 y_1 ⊙ ⋯ ⊙ H^1 y_k))`.
pub fn invert<S, F>(forward: F, bound: usize) -> Inverse<F, S>
where
    S: Scalar,
    F: Morphism<S>,
{
    assert!(bound >= 1, "inversion bound must be positive");
    Inverse {
        forward,
        bound,
        memo: RwLock::new(HashMap::new()),
    }
}

impl<F, S> Inverse<F, S>
where
    S: Scalar,
    F: Morphism<S>,
{
    pub fn forward(&self) -> &F {
        &self.forward
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    fn linear(&self, t: &F::Target) -> Result<Combination<F::Source, S>> {
        check_valid(t)?;
        let (src, c) = self
            .forward
            .linear_preimage(t)
            .ok_or_else(|| Error::NotInvertible(format!("{t:?}")))?;
        if c.is_zero() {
            return Err(Error::NotInvertible(format!("{t:?}")));
        }
        Ok(Combination::generator(src, S::one() / c))
    }
}

impl<F, S> Morphism<S> for Inverse<F, S>
where
    S: Scalar,
    F: Morphism<S>,
{
    type Source = F::Target;
    type Target = F::Source;

    fn level(&self, word: &Word<F::Target>) -> Result<Combination<F::Source, S>> {
        let k = word.len();
        if k > self.bound {
            return Err(Error::BoundExceeded {
                len: k,
                bound: self.bound,
            });
        }
        if let Some(v) = memo_get(&self.memo, word) {
            return Ok(v);
        }
        let out = if k == 1 {
            self.linear(&word.letters()[0])?
        } else {
            let mut pulled: Option<Combination<F::Source, S>> = None;
            for y in word.letters() {
                let x = self.linear(y)?;
                pulled = Some(match pulled {
                    None => x,
                    Some(p) => p.odot(&x),
                });
            }
            let pulled = pulled.expect("nonempty word");
            let image = apply_hat(&self.forward, &pulled)?;
            let mut acc = Combination::zero();
            for (u, c) in image.iter() {
                if u.len() < k {
                    acc.add_scaled(&self.level(u)?, c);
                }
            }
            acc.neg()
        };
        memo_put(&self.memo, word, &out);
        Ok(out)
    }

    fn linear_preimage(&self, t: &F::Source) -> Option<(F::Target, S)> {
        // H^1(y) = c^{-1} x where Φ^1(x) = c y, so H^1 is diagonal when Φ^1 is
        // diagonal; the preimage of x under H^1 is y with coefficient c^{-1}.
        let image = self.forward.level(&Word::single(t.clone())).ok()?;
        let mut it = image.iter();
        let (w, c) = it.next()?;
        if it.next().is_some() || w.len() != 1 || c.is_zero() {
            return None;
        }
        Some((w.letters()[0].clone(), S::one() / c.clone()))
    }
}

/// All canonical words of length `1..=max_len` over `window`.
pub fn words_up_to<K: Generator>(window: &[K], max_len: usize) -> Vec<Word<K>> {
    let mut gens: Vec<K> = window.to_vec();
    gens.sort();
    gens.dedup();
    let mut out = Vec::new();
    let mut cur: Vec<K> = Vec::new();
    words_rec(&gens, 0, max_len, &mut cur, &mut out);
    out
}

fn words_rec<K: Generator>(gens: &[K], from: usize, max_len: usize, cur: &mut Vec<K>, out: &mut Vec<Word<K>>) {
    if !cur.is_empty() {
        out.push(Word::from_sorted(cur.clone()));
    }
    if cur.len() == max_len {
        return;
    }
    for i in from..gens.len() {
        let g = &gens[i];
        // odd letters cannot repeat
        let next_from = if g.is_odd() { i + 1 } else { i };
        cur.push(g.clone());
        words_rec(gens, next_from, max_len, cur, out);
        cur.pop();
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport<K, S> {
    pub checked: usize,
    pub violation: Option<(Word<K>, Combination<K, S>)>,
}

impl<K, S> CheckReport<K, S> {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Evaluates `ℓ̂ ∘ ℓ̂` on every word over `window` up to length `bound` and
/// reports the first nonzero result.
pub fn check_structure<S, L>(l: &L, window: &[L::Gen], bound: usize) -> Result<CheckReport<L::Gen, S>>
where
    S: Scalar,
    L: Structure<S> + ?Sized,
{
    let words = words_up_to(window, bound);
    let mut checked = 0;
    for w in words {
        let once = extend_coderivation(l, &w)?;
        let twice = extend_coderivation_linear(l, &once)?;
        checked += 1;
        if !twice.is_zero() {
            return Ok(CheckReport {
                checked,
                violation: Some((w, twice)),
            });
        }
    }
    Ok(CheckReport {
        checked,
        violation: None,
    })
}

#[derive(Clone, Debug)]
pub struct HomomorphismReport<A, B, S> {
    pub checked: usize,
    pub violation: Option<(Word<A>, Combination<B, S>)>,
}

impl<A, B, S> HomomorphismReport<A, B, S> {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `Φ̂ ∘ ℓ̂_V = ℓ̂_W ∘ Φ̂` on every word over `window` up to `bound`.
pub fn check_homomorphism<S, F, LV, LW>(
    f: &F,
    source: &LV,
    target: &LW,
    window: &[F::Source],
    bound: usize,
) -> Result<HomomorphismReport<F::Source, F::Target, S>>
where
    S: Scalar,
    F: Morphism<S> + ?Sized,
    LV: Structure<S, Gen = F::Source> + ?Sized,
    LW: Structure<S, Gen = F::Target> + ?Sized,
{
    let mut checked = 0;
    for w in words_up_to(window, bound) {
        let left = apply_hat(f, &extend_coderivation(source, &w)?)?;
        let right = extend_coderivation_linear(target, &extend_morphism(f, &w)?)?;
        let mut diff = left;
        diff.add_scaled(&right, &-S::one());
        checked += 1;
        if !diff.is_zero() {
            return Ok(HomomorphismReport {
                checked,
                violation: Some((w, diff)),
            });
        }
    }
    Ok(HomomorphismReport {
        checked,
        violation: None,
    })
}

/// Two morphisms agree on every word over `window` up to `bound`. Returns
/// the first disagreement.
pub fn first_disagreement<S, F, G>(f: &F, g: &G, window: &[F::Source], bound: usize) -> Result<Option<Word<F::Source>>>
where
    S: Scalar,
    F: Morphism<S> + ?Sized,
    G: Morphism<S, Source = F::Source, Target = F::Target> + ?Sized,
{
    for w in words_up_to(window, bound) {
        if f.level(&w)? != g.level(&w)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Checks that `Φ̂(w)` only contains words whose total action is at most the
/// action of `w`. Returns the first offending output word.
pub fn check_filtered<F, AS, AT>(
    f: &F,
    w: &Word<F::Source>,
    source_action: AS,
    target_action: AT,
) -> Result<Option<Word<F::Target>>>
where
    F: Morphism<Rational> + ?Sized,
    AS: Fn(&F::Source) -> Rational,
    AT: Fn(&F::Target) -> Rational,
{
    let input: Rational = w.letters().iter().map(&source_action).sum();
    let image = extend_morphism(f, w)?;
    let offending = image
        .iter()
        .map(|(u, _)| u)
        .find(|u| u.letters().iter().map(&target_action).sum::<Rational>() > input)
        .cloned();
    Ok(offending)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
    struct G(u32, i64);

    impl Generator for G {
        fn degree(&self) -> i64 {
            self.1
        }
    }

    fn ev(i: u32) -> G {
        G(i, 2)
    }

    fn od(i: u32) -> G {
        G(i, 1)
    }

    type C = Combination<G, Rational>;

    #[test]
    fn odd_square_vanishes_and_reordering_signs() {
        assert!(Word::from_letters(vec![od(1), od(1)]).is_none());
        let (w, s) = Word::from_letters(vec![od(2), od(1)]).unwrap();
        assert_eq!(w.letters(), &[od(1), od(2)]);
        assert_eq!(s, -1);
        let (_, s) = Word::from_letters(vec![ev(2), od(1)]).unwrap();
        assert_eq!(s, 1);
        let (w, s) = Word::from_letters(vec![ev(1), ev(1)]).unwrap();
        assert_eq!((w.len(), s), (2, 1));
    }

    #[test]
    fn sorting_is_idempotent() {
        let (w, _) = Word::from_letters(vec![od(3), ev(1), od(2), ev(0)]).unwrap();
        let (w2, s2) = Word::from_letters(w.letters().to_vec()).unwrap();
        assert_eq!(w, w2);
        assert_eq!(s2, 1);
    }

    #[test]
    fn abelian_coderivation_is_zero() {
        let l = Abelian::<G>::new();
        let w = Word::from_letters(vec![ev(1), ev(2), od(3)]).unwrap().0;
        assert!(extend_coderivation::<Rational, _>(&l, &w).unwrap().is_zero());
    }

    #[test]
    fn leibniz_on_two_even_letters() {
        // ℓ^1(g_i) = g_{i+10}, no higher operations
        let l = FnStructure::new(|w: &Word<G>| -> C {
            if w.len() == 1 {
                let g = w.letters()[0];
                Combination::generator(G(g.0 + 10, g.1 + 1), int(1))
            } else {
                C::zero()
            }
        });
        let w = Word::from_letters(vec![ev(1), ev(2)]).unwrap().0;
        let got = extend_coderivation(&l, &w).unwrap();
        let mut expected = C::from_letters(vec![G(11, 3), ev(2)], int(1));
        expected.add_assign(&C::from_letters(vec![G(12, 3), ev(1)], int(1)));
        assert_eq!(got, expected);
    }

    #[test]
    fn identity_extension_is_identity() {
        let id = Identity::<G>::new();
        let w = Word::from_letters(vec![ev(1), od(2), ev(3), od(4)]).unwrap().0;
        let got: C = extend_morphism(&id, &w).unwrap();
        assert_eq!(got, C::word(w, int(1)));
    }

    #[test]
    fn diagonal_extension_is_multiplicative() {
        let f = FnMorphism::new(|w: &Word<G>| -> C {
            if w.len() == 1 {
                let g = w.letters()[0];
                Combination::generator(g, int(i64::from(g.0) + 1))
            } else {
                C::zero()
            }
        });
        let w = Word::from_letters(vec![ev(1), ev(4)]).unwrap().0;
        let got = extend_morphism(&f, &w).unwrap();
        assert_eq!(got, C::word(w, int(10)));
    }

    #[test]
    fn level_two_only_on_four_letters_gives_three_pairings() {
        let f = FnMorphism::new(|w: &Word<G>| -> C {
            if w.len() == 2 {
                let (a, b) = (w.letters()[0].0, w.letters()[1].0);
                Combination::generator(G(10 * a + b, 4), int(1))
            } else {
                C::zero()
            }
        });
        let w = Word::from_letters(vec![ev(1), ev(2), ev(3), ev(4)]).unwrap().0;
        let got = extend_morphism(&f, &w).unwrap();
        let mut expected = C::from_letters(vec![G(12, 4), G(34, 4)], int(1));
        expected.add_assign(&C::from_letters(vec![G(13, 4), G(24, 4)], int(1)));
        expected.add_assign(&C::from_letters(vec![G(14, 4), G(23, 4)], int(1)));
        assert_eq!(got, expected);
    }

    fn sample_forward() -> impl Morphism<Rational, Source = G, Target = G> {
        FnMorphism::new(|w: &Word<G>| -> C {
            let letters = w.letters();
            match letters.len() {
                1 => Combination::generator(letters[0], rat(i64::from(letters[0].0) + 1, 2)),
                2 => {
                    let deg = letters[0].1 + letters[1].1;
                    Combination::generator(G(letters[0].0 + letters[1].0 + 1, deg), int(3))
                }
                3 => {
                    let deg = letters.iter().map(|g| g.1).sum();
                    Combination::generator(G(letters.iter().map(|g| g.0).sum::<u32>() + 2, deg), rat(-1, 5))
                }
                _ => C::zero(),
            }
        })
        .with_preimage(|t: &G| Some((*t, rat(i64::from(t.0) + 1, 2))))
    }

    #[test]
    fn inverse_is_two_sided() {
        let f = sample_forward();
        let h = invert(&f, 4);
        let window: Vec<G> = (1..=3).map(ev).collect();
        let left = compose(&h, &f, 4);
        let right = compose(&f, &h, 4);
        let id = Identity::<G>::new();
        assert_eq!(first_disagreement(&left, &id, &window, 4).unwrap(), None);
        assert_eq!(first_disagreement(&right, &id, &window, 4).unwrap(), None);
    }

    #[test]
    fn inverse_level_two_formula() {
        let f = sample_forward();
        let h = invert(&f, 2);
        let (y1, y2) = (ev(1), ev(2));
        let got = h.level(&Word::from_letters(vec![y1, y2]).unwrap().0).unwrap();
        let h1 = |y: G| h.level(&Word::single(y)).unwrap();
        let inner = f.level(&Word::from_letters(vec![y1, y2]).unwrap().0).unwrap();
        // H^2(y1,y2) = -H^1(F^2(H^1 y1, H^1 y2)); H^1 is diagonal here
        let scale = h1(y1).coefficient_of(&y1) * h1(y2).coefficient_of(&y2);
        let mut expected = C::zero();
        for (w, c) in inner.iter() {
            expected.add_scaled(&h1(w.letters()[0]), &(-c.clone() * scale.clone()));
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn identity_composition_is_neutral() {
        let f = sample_forward();
        let id = Identity::<G>::new();
        let window: Vec<G> = (1..=3).map(ev).chain([od(7)]).collect();
        assert_eq!(first_disagreement(&compose(&id, &f, 3), &f, &window, 3).unwrap(), None);
        assert_eq!(first_disagreement(&compose(&f, &id, 3), &f, &window, 3).unwrap(), None);
    }

    #[test]
    fn composite_level_two() {
        let f = sample_forward();
        let g = sample_forward();
        let gf = compose(&g, &f, 2);
        let w = Word::from_letters(vec![ev(1), ev(2)]).unwrap().0;
        let mut expected = C::zero();
        for (u, c) in f.level(&w).unwrap().iter() {
            expected.add_scaled(&g.level(u).unwrap(), c);
        }
        let f1 = |k| f.level(&Word::single(ev(k))).unwrap();
        expected.add_assign(
            &g.level(&Word::from_letters(vec![ev(1), ev(2)]).unwrap().0)
                .unwrap()
                .scaled(&(f1(1).coefficient_of(&ev(1)) * f1(2).coefficient_of(&ev(2)))),
        );
        assert_eq!(gf.level(&w).unwrap(), expected);
        assert!(matches!(
            gf.level(&Word::from_letters(vec![ev(1), ev(1), ev(1)]).unwrap().0),
            Err(Error::BoundExceeded { len: 3, bound: 2 })
        ));
    }

    #[test]
    fn non_invertible_linear_part() {
        let f = FnMorphism::new(|_: &Word<G>| C::zero());
        let h = invert(&f, 2);
        assert!(matches!(h.level(&Word::single(ev(1))), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn words_up_to_skips_odd_repeats() {
        let words = words_up_to(&[ev(1), od(2)], 3);
        // e, o, ee, eo, eee, eeo
        assert_eq!(words.len(), 6);
    }

    #[test]
    fn float_coefficients_work() {
        let f = FnMorphism::new(|w: &Word<G>| -> Combination<G, f64> {
            if w.len() == 1 {
                Combination::generator(w.letters()[0], 2.0)
            } else {
                Combination::generator(G(99, w.degree()), 0.5)
            }
        })
        .with_preimage(|t: &G| Some((*t, 2.0)));
        let h = invert(&f, 3);
        let id = Identity::<G>::new();
        let back = compose(&h, &f, 3);
        let w = Word::from_letters(vec![ev(1), ev(2)]).unwrap().0;
        let got = back.level(&w).unwrap();
        assert!(got.iter().all(|(_, c)| c.abs() < 1e-12), "{got:?}");
        assert_eq!(
            back.level(&Word::single(ev(1))).unwrap(),
            id.level(&Word::single(ev(1))).unwrap()
        );
    }
}
