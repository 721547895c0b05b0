//! Slow, independent reference implementations used to check the fast
//! paths. Nothing here calls the greedy walk, the shuffle enumerators or
//! the morphism extension it is meant to check. Guards are hard errors.

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::exact::{int, LatticePoint};
use crate::linf::{Combination, Generator, Morphism, Word};
use crate::orbits::{OrbitId, Side, SpectrumParams};
use crate::scalar::Scalar;
use crate::DualRational;

/// Perturbed `a_i · m`, recomputed from the definition of each side.
fn value(p: &SpectrumParams, axis: usize, m: i64) -> DualRational {
    let a = &p.a()[axis - 1];
    let main = a * int(m);
    let eps = match p.side() {
        Side::Canonical => &main * int(axis as i64),
        Side::Plus if axis == 2 => int(m),
        Side::Minus if axis == 2 => int(-m),
        _ => int(0),
    };
    Dual::new(main, eps)
}

fn all_compositions(k: u32, n: usize) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in all_compositions(k - first, n - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `Γ_k` as the minimizer of `max_i a_i v_i` over all `v ≥ 0` with `Σv = k`.
pub fn gamma_bruteforce(p: &SpectrumParams, k: u32) -> Result<LatticePoint> {
    let n = p.dim();
    if k > 40 || n > 5 {
        return Err(Error::OracleGuard(format!(
            "gamma_bruteforce needs k <= 40 and n <= 5, got k={k}, n={n}"
        )));
    }
    let score =
        |v: &[u32]| -> DualRational { (1..=n).map(|i| value(p, i, i64::from(v[i - 1]))).max().expect("n >= 1") };
    let mut best: Option<(DualRational, Vec<u32>)> = None;
    let mut tied = false;
    for v in all_compositions(k, n) {
        let s = score(&v);
        match &best {
            Some((b, _)) if s > *b => {}
            Some((b, _)) if s == *b => tied = true,
            _ => {
                best = Some((s, v));
                tied = false;
            }
        }
    }
    if tied {
        return Err(Error::Invariant(format!("minimizer for k={k} at {p} is not unique")));
    }
    Ok(LatticePoint::new(best.expect("at least one composition").1))
}

/// The first `count` orbits by increasing perturbed action, by merging the
/// progressions `{m · a_i}`.
pub fn merge_spectrum(p: &SpectrumParams, count: usize) -> Result<Vec<(DualRational, OrbitId)>> {
    if count > 10_000 {
        return Err(Error::OracleGuard(format!(
            "merge_spectrum needs count <= 10000, got {count}"
        )));
    }
    let n = p.dim();
    let mut next: Vec<u32> = vec![1; n];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut best_axis = 1;
        let mut best = value(p, 1, i64::from(next[0]));
        for axis in 2..=n {
            let v = value(p, axis, i64::from(next[axis - 1]));
            if v < best {
                best = v;
                best_axis = axis;
            }
        }
        out.push((
            best,
            OrbitId {
                axis: best_axis,
                multiplicity: next[best_axis - 1],
            },
        ));
        next[best_axis - 1] += 1;
    }
    Ok(out)
}

/// Checks the maximality property of `Γ_k`: every `v` in the box
/// `[-1, k+1]^n`, not entirely `≤ 0`, whose orbit `ν_{i_M}^{v_{i_M}}` is
/// `o_k` satisfies `v ≤ Γ_k` componentwise. Returns the first
/// counterexample. `gamma_k` and `orbit_k` are the values under test.
pub fn maximality_counterexample(
    p: &SpectrumParams,
    k: u32,
    gamma_k: &LatticePoint,
    orbit_k: OrbitId,
) -> Result<Option<Vec<i64>>> {
    let n = p.dim();
    if k > 12 || n > 3 {
        return Err(Error::OracleGuard(format!(
            "maximality check needs k <= 12 and n <= 3, got k={k}, n={n}"
        )));
    }
    let hi = i64::from(k) + 1;
    let mut v = vec![-1i64; n];
    loop {
        if v.iter().any(|&x| x > 0) {
            let (axis, _) = (1..=n)
                .map(|i| (i, value(p, i, v[i - 1])))
                .max_by(|x, y| x.1.cmp(&y.1))
                .expect("n >= 1");
            let m = v[axis - 1];
            let hit = m > 0 && axis == orbit_k.axis && m == i64::from(orbit_k.multiplicity);
            if hit && (0..n).any(|i| v[i] > i64::from(gamma_k[i])) {
                return Ok(Some(v));
            }
        }
        // odometer over the box
        let mut i = 0;
        loop {
            if i == n {
                return Ok(None);
            }
            v[i] += 1;
            if v[i] <= hi {
                break;
            }
            v[i] = -1;
            i += 1;
        }
    }
}

/// All set partitions of `0..k` as lists of increasing blocks, blocks ordered
/// by their first element (restricted growth strings).
fn set_partitions(k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; k];
    fn rec(pos: usize, max_label: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        let k = labels.len();
        if pos == k {
            let blocks = labels.iter().copied().max().map_or(0, |m| m + 1);
            let mut parts = vec![Vec::new(); blocks];
            for (i, &l) in labels.iter().enumerate() {
                parts[l].push(i);
            }
            out.push(parts);
            return;
        }
        for l in 0..=max_label {
            labels[pos] = l;
            let next_max = if l == max_label { max_label + 1 } else { max_label };
            rec(pos + 1, next_max, labels, out);
        }
    }
    if k > 0 {
        labels[0] = 0;
        rec(1, 1, &mut labels, &mut out);
    }
    out
}

/// `(-1)^{#inverted odd pairs}` of listing `letters` in the order `order`.
fn reorder_sign(order: &[usize], odd: &[bool]) -> i64 {
    let mut sign = 1;
    for x in 0..order.len() {
        for y in x + 1..order.len() {
            if order[x] > order[y] && odd[order[x]] && odd[order[y]] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `Φ̂(w)` by summing over every set partition of the positions of `w`, with
/// the Koszul sign of listing the blocks consecutively, and multiplying the
/// block images in that order.
pub fn morphism_bruteforce<S, M>(m: &M, w: &Word<M::Source>) -> Result<Combination<M::Target, S>>
where
    S: Scalar,
    M: Morphism<S> + ?Sized,
{
    let k = w.len();
    if k > 5 {
        return Err(Error::OracleGuard(format!(
            "morphism_bruteforce needs word length <= 5, got {k}"
        )));
    }
    let letters = w.letters();
    let odd: Vec<bool> = letters.iter().map(Generator::is_odd).collect();
    let mut out = Combination::zero();
    for blocks in set_partitions(k) {
        let order: Vec<usize> = blocks.iter().flatten().copied().collect();
        let sign = S::from_i64(reorder_sign(&order, &odd));
        let mut term: Vec<(Vec<M::Target>, S)> = vec![(Vec::new(), S::one())];
        for block in &blocks {
            let sub = Word::from_letters(block.iter().map(|&i| letters[i].clone()).collect())
                .expect("sub-word of a nonzero word")
                .0;
            let image = m.level(&sub)?;
            let mut next = Vec::new();
            for (prefix, c) in &term {
                for (u, x) in image.iter() {
                    let mut letters = prefix.clone();
                    letters.extend_from_slice(u.letters());
                    next.push((letters, c.clone() * x.clone()));
                }
            }
            term = next;
        }
        for (ls, c) in term {
            if ls.is_empty() || c.is_zero() {
                continue;
            }
            out.add_scaled(&Combination::from_letters(ls, S::one()), &(c * sign.clone()));
        }
    }
    Ok(out)
}

/// `Γ^a` is a unit-step path from the origin whose projections satisfy
/// `a_j(v_j + 1) > a_i v_i` for all `i, j` (perturbed values).
pub fn satisfies_projection_bounds(p: &SpectrumParams, v: &LatticePoint) -> bool {
    let n = p.dim();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let lhs = value(p, j, i64::from(v[j - 1]) + 1);
            let rhs = value(p, i, i64::from(v[i - 1]));
            if lhs <= rhs {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn fixture() {
        let p = SpectrumParams::canonical(vec![int(1), rat(3, 2)]).unwrap();
        assert_eq!(gamma_bruteforce(&p, 8).unwrap(), LatticePoint::new(vec![5, 3]));
        let p = SpectrumParams::canonical(vec![int(1), int(1), int(1)]).unwrap();
        assert_eq!(gamma_bruteforce(&p, 3).unwrap(), LatticePoint::new(vec![1, 1, 1]));
        assert!(matches!(gamma_bruteforce(&p, 41), Err(Error::OracleGuard(_))));
    }

    #[test]
    fn merge_examples() {
        let p = SpectrumParams::canonical(vec![int(1), rat(3, 2)]).unwrap();
        let mains: Vec<_> = merge_spectrum(&p, 5)
            .unwrap()
            .into_iter()
            .map(|(v, _)| v.main)
            .collect();
        assert_eq!(mains, vec![int(1), rat(3, 2), int(2), int(3), int(3)]);
        let p = SpectrumParams::canonical(vec![int(1), int(1)]).unwrap();
        let s = merge_spectrum(&p, 2).unwrap();
        assert_eq!((s[0].1.axis, s[1].1.axis), (1, 2));
        let p = SpectrumParams::new(vec![int(2), int(13)], Side::Plus).unwrap();
        let s = merge_spectrum(&p, 14).unwrap();
        assert_eq!(s[13].0.main, int(26));
        assert_eq!(
            s[13].1,
            OrbitId {
                axis: 1,
                multiplicity: 13
            }
        );
        assert!(merge_spectrum(&p, 10_001).is_err());
    }

    #[test]
    fn set_partition_counts() {
        let bell = [1, 1, 2, 5, 15, 52];
        for (k, &b) in bell.iter().enumerate().skip(1) {
            assert_eq!(set_partitions(k).len(), b);
        }
    }
}
