//! Exact arithmetic helpers and the small enumeration primitives the rest of
//! the crate is built on: factorials, lattice points, partitions,
//! compositions, shuffles and Koszul signs.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Index, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::Error;
use crate::Rational;

/// `n / d` as a reduced rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse(format!("empty rational in {s:?}")));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(n, d))
    } else {
        let n = BigInt::from_str(t).map_err(|_| Error::Parse(format!("bad integer in {s:?}")))?;
        Ok(Rational::from_integer(n))
    }
}

/// Serializes as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn factorial(n: u32) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `n! / (k_1! ... k_s!)` with `n = Σ k_i`.
pub fn multinomial(parts: &[u32]) -> BigUint {
    let n: u32 = parts.iter().sum();
    let den = parts.iter().fold(BigUint::one(), |acc, &k| acc * factorial(k));
    factorial(n) / den
}

pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    multinomial(&[k, n - k])
}

/// A point of `Z_{≥0}^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(Vec<u32>);

impl LatticePoint {
    pub fn new(components: Vec<u32>) -> Self {
        assert!(!components.is_empty(), "lattice points need at least one component");
        Self(components)
    }

    pub fn origin(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `≤`.
    pub fn dominated_by(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn with_increment(&self, axis: usize) -> Self {
        let mut v = self.0.clone();
        v[axis] += 1;
        Self(v)
    }

    /// `v_1! ⋯ v_n!`
    pub fn factorial(&self) -> BigUint {
        vec_factorial(self)
    }
}

impl Index<usize> for LatticePoint {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl Add for &LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: &LatticePoint) -> LatticePoint {
        assert_eq!(self.dim(), rhs.dim());
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticePoint {
    type Output = Vec<i64>;
    fn sub(self, rhs: &LatticePoint) -> Vec<i64> {
        self.0
            .iter()
            .zip(&rhs.0)
            .map(|(&a, &b)| i64::from(a) - i64::from(b))
            .collect()
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub fn vec_factorial(v: &LatticePoint) -> BigUint {
    v.components().iter().fold(BigUint::one(), |acc, &c| acc * factorial(c))
}

/// Sum of a nonempty list of lattice points of equal dimension.
pub fn lattice_sum<'a, I: IntoIterator<Item = &'a LatticePoint>>(points: I) -> LatticePoint {
    let mut it = points.into_iter();
    let first = it.next().expect("lattice_sum of nothing").clone();
    it.fold(first, |acc, p| &acc + p)
}

/// Partitions of `d` into non-increasing positive parts, in reverse
/// lexicographic order: `(d)` first, `(1,…,1)` last. `d = 0` yields nothing.
pub fn partitions(d: u32) -> Partitions {
    Partitions {
        next: (d > 0).then(|| vec![d]),
    }
}

#[derive(Clone, Debug)]
pub struct Partitions {
    next: Option<Vec<u32>>,
}

impl Iterator for Partitions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.next.take()?;
        // Successor: find the rightmost part > 1, decrement it and refill the
        // tail greedily with parts no larger than it.
        if let Some(pos) = cur.iter().rposition(|&p| p > 1) {
            let mut succ = cur[..pos].to_vec();
            let head = cur[pos] - 1;
            let mut rest: u32 = cur[pos + 1..].iter().sum::<u32>() + 1;
            succ.push(head);
            while rest > 0 {
                let p = rest.min(head);
                succ.push(p);
                rest -= p;
            }
            self.next = Some(succ);
        }
        Some(cur)
    }
}

/// `|Aut(d_1,…,d_k)|`: the product of `m!` over the multiplicities `m` of
/// the distinct values.
pub fn aut_order<T: Ord>(parts: &[T]) -> BigUint {
    let mut counts: BTreeMap<&T, u32> = BTreeMap::new();
    for p in parts {
        *counts.entry(p).or_default() += 1;
    }
    counts.values().fold(BigUint::one(), |acc, &m| acc * factorial(m))
}

/// All `v ∈ Z_{≥0}^n` with `v_1 + ⋯ + v_n = k`, starting at `(k,0,…,0)` and
/// descending lexicographically.
pub fn compositions(k: u32, n: usize) -> Compositions {
    assert!(n >= 1, "compositions need n ≥ 1");
    let mut first = vec![0; n];
    first[0] = k;
    Compositions { next: Some(first) }
}

#[derive(Clone, Debug)]
pub struct Compositions {
    next: Option<Vec<u32>>,
}

impl Iterator for Compositions {
    type Item = LatticePoint;

    fn next(&mut self) -> Option<LatticePoint> {
        let cur = self.next.take()?;
        let n = cur.len();
        // Rightmost nonzero entry strictly before the last slot moves one unit
        // to its right neighbour, which then absorbs everything after it.
        if let Some(pos) = cur[..n - 1].iter().rposition(|&c| c > 0) {
            let mut succ = cur.clone();
            let tail: u32 = cur[pos + 1..].iter().sum();
            succ[pos] -= 1;
            for c in succ[pos + 1..].iter_mut() {
                *c = 0;
            }
            succ[pos + 1] = tail + 1;
            self.next = Some(succ);
        }
        Some(LatticePoint(cur))
    }
}

/// A permutation of `{0,…,k-1}` written as its image sequence
/// `σ(0), σ(1), …`. Displayed 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Self {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            assert!(i < images.len() && !seen[i], "not a permutation: {images:?}");
            seen[i] = true;
        }
        Self(images)
    }

    pub fn identity(k: usize) -> Self {
        Self((0..k).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// Splits the image sequence into consecutive blocks of the given sizes.
    pub fn blocks<'a>(&'a self, sizes: &'a [usize]) -> impl Iterator<Item = &'a [usize]> + 'a {
        let mut start = 0;
        sizes.iter().map(move |&s| {
            let b = &self.0[start..start + s];
            start += s;
            b
        })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", s + 1)?;
        }
        write!(f, "]")
    }
}

/// `Sh(k_1,…,k_s)`: permutations increasing on each consecutive block.
pub fn shuffles(sizes: &[usize]) -> Vec<Permutation> {
    shuffle_rec(sizes, false)
}

/// The canonical subset of `Sh(k_1,…,k_s)` for `k_1 ≤ ⋯ ≤ k_s`: blocks of
/// equal length must additionally appear in lexicographically increasing
/// order, so each unordered set partition with these block sizes appears
/// exactly once.
pub fn ordered_shuffles(sizes: &[usize]) -> Vec<Permutation> {
    debug_assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "block sizes must be sorted");
    shuffle_rec(sizes, true)
}

fn shuffle_rec(sizes: &[usize], canonical: bool) -> Vec<Permutation> {
    assert!(sizes.iter().all(|&s| s >= 1), "block sizes must be positive");
    let k: usize = sizes.iter().sum();
    let mut out = Vec::new();
    let mut used = vec![false; k];
    let mut images = Vec::with_capacity(k);
    fill_block(sizes, 0, canonical, &mut used, &mut images, &mut out);
    out
}

fn fill_block(
    sizes: &[usize],
    block: usize,
    canonical: bool,
    used: &mut [bool],
    images: &mut Vec<usize>,
    out: &mut Vec<Permutation>,
) {
    if block == sizes.len() {
        out.push(Permutation(images.clone()));
        return;
    }
    let start = images.len();
    let size = sizes[block];
    // Lower bound on the first element of this block.
    let min_first = if canonical && block > 0 && sizes[block - 1] == size {
        images[start - size] + 1
    } else {
        0
    };
    choose(sizes, block, canonical, used, images, out, start + size, min_first);
}

#[allow(clippy::too_many_arguments)]
fn choose(
    sizes: &[usize],
    block: usize,
    canonical: bool,
    used: &mut [bool],
    images: &mut Vec<usize>,
    out: &mut Vec<Permutation>,
    end: usize,
    from: usize,
) {
    if images.len() == end {
        fill_block(sizes, block + 1, canonical, used, images, out);
        return;
    }
    for i in from..used.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        images.push(i);
        choose(sizes, block, canonical, used, images, out, end, i + 1);
        images.pop();
        used[i] = false;
    }
}

/// Sign of `v_{σ(1)} ⊙ ⋯ ⊙ v_{σ(k)}` relative to `v_1 ⊙ ⋯ ⊙ v_k`, where
/// `degrees[i]` is the degree of `v_i`: one factor of `-1` for every pair of
/// odd elements whose relative order σ reverses.
pub fn koszul_sign(sigma: &Permutation, degrees: &[i64]) -> i32 {
    assert_eq!(sigma.len(), degrees.len(), "degree list length mismatch");
    let img = sigma.images();
    let mut odd_inversions = 0usize;
    for i in 0..img.len() {
        if degrees[img[i]] % 2 == 0 {
            continue;
        }
        for j in i + 1..img.len() {
            if img[i] > img[j] && degrees[img[j]] % 2 != 0 {
                odd_inversions += 1;
            }
        }
    }
    if odd_inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vec_factorial_examples() {
        assert_eq!(vec_factorial(&LatticePoint::new(vec![0, 0])), BigUint::from(1u32));
        assert_eq!(vec_factorial(&LatticePoint::new(vec![3, 2])), BigUint::from(12u32));
        assert_eq!(vec_factorial(&LatticePoint::new(vec![5, 3])), BigUint::from(720u32));
    }

    #[test]
    fn partitions_of_small_numbers() {
        let p3: Vec<_> = partitions(3).collect();
        assert_eq!(p3, vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(partitions(5).count(), 7);
        assert_eq!(partitions(0).count(), 0);
        assert_eq!(aut_order(&[1u32, 1, 1, 1]), BigUint::from(24u32));
        assert_eq!(aut_order(&[3u32, 1, 1]), BigUint::from(2u32));
    }

    #[test]
    fn partition_counts_match_euler() {
        let expected = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77];
        for (d, &p) in (1..=12).zip(expected.iter()) {
            assert_eq!(partitions(d).count(), p, "p({d})");
        }
    }

    #[test]
    fn compositions_examples() {
        let c: Vec<_> = compositions(2, 2).map(|p| p.components().to_vec()).collect();
        assert_eq!(c, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let c0: Vec<_> = compositions(0, 3).collect();
        assert_eq!(c0, vec![LatticePoint::new(vec![0, 0, 0])]);
        assert_eq!(compositions(3, 3).count(), 10);
        assert_eq!(compositions(5, 1).count(), 1);
    }

    #[test]
    fn compositions_count_is_binomial() {
        for n in 1..=4usize {
            for k in 0..=7u32 {
                let expected = binomial(k + n as u32 - 1, n as u32 - 1);
                assert_eq!(BigUint::from(compositions(k, n).count()), expected);
            }
        }
    }

    #[test]
    fn ordered_shuffle_examples() {
        assert_eq!(ordered_shuffles(&[1, 1]), vec![Permutation::identity(2)]);
        assert_eq!(ordered_shuffles(&[1, 2]).len(), 3);
        let s22: Vec<_> = ordered_shuffles(&[2, 2]).iter().map(|p| p.images().to_vec()).collect();
        assert_eq!(s22, vec![vec![0, 1, 2, 3], vec![0, 2, 1, 3], vec![0, 3, 1, 2]]);
    }

    #[test]
    fn shuffle_cardinalities() {
        for sizes in [
            vec![1, 1, 1],
            vec![1, 1, 2],
            vec![2, 2, 2],
            vec![1, 3],
            vec![1, 2, 2, 3],
        ] {
            let full = shuffles(&sizes).len();
            let canon = ordered_shuffles(&sizes).len();
            let parts: Vec<u32> = sizes.iter().map(|&s| s as u32).collect();
            assert_eq!(BigUint::from(full), multinomial(&parts));
            assert_eq!(BigUint::from(canon) * aut_order(&sizes), BigUint::from(full));
        }
    }

    #[test]
    fn koszul_examples() {
        let swap = Permutation::new(vec![1, 0]);
        assert_eq!(koszul_sign(&swap, &[2, 4]), 1);
        assert_eq!(koszul_sign(&swap, &[1, 3]), -1);
        assert_eq!(koszul_sign(&Permutation::identity(3), &[1, 1, 1]), 1);
        // v1 v2 v3 -> v2 v3 v1 with v1, v2 odd: v1 passes v2 once.
        assert_eq!(koszul_sign(&Permutation::new(vec![1, 2, 0]), &[1, 1, 2]), -1);
    }

    #[test]
    fn rational_round_trip() {
        for s in ["0", "-3", "7/2", "-11/4", "123456789012345678901234567891/2"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
