//! Infinitesimal cobordism counts
//! `J^{a-}_{a+}(i_1,…,i_k) = ⟨(Ξ^{a-}_{a+})^k(o_{i_1},…,o_{i_k}), o_{Σi+k-1}⟩`
//! for the family `(1, a)`, by closed forms, by the recursion, and by
//! composing `η_{a+} ∘ ε_{a-}` in the L∞ engine.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, int, lattice_sum, ordered_shuffles, partitions, vec_factorial, LatticePoint};
use crate::linf::{Morphism, Word};
use crate::orbits::{jump_union, Side, Spectrum, SpectrumParams};
use crate::sft::{push_forward, target_index, xi, OrbitGen};
use crate::Rational;

fn ratio(num: &LatticePoint, den: &LatticePoint) -> Rational {
    Rational::new(BigInt::from(vec_factorial(num)), BigInt::from(vec_factorial(den)))
}

fn sides(a: &Rational) -> Result<(Spectrum, Spectrum)> {
    Ok((
        Spectrum::new(SpectrumParams::plane(a.clone(), Side::Minus)?),
        Spectrum::new(SpectrumParams::plane(a.clone(), Side::Plus)?),
    ))
}

fn check_indices(indices: &[u32]) -> Result<()> {
    if indices.is_empty() || indices.contains(&0) {
        return Err(Error::InvalidParams(format!(
            "orbit indices must be positive, got {indices:?}"
        )));
    }
    Ok(())
}

/// `Γ^{a+}_i! / Γ^{a-}_i!`: equal to `a` if `a ∈ J_i`, else 1.
pub fn jump_cylinder(a: &Rational, i: u32) -> Result<Rational> {
    check_indices(&[i])?;
    let (minus, plus) = sides(a)?;
    Ok(ratio(&plus.gamma(i as usize), &minus.gamma(i as usize)))
}

/// Closed form for `J(i, j)`.
pub fn jump_pants(a: &Rational, i: u32, j: u32) -> Result<Rational> {
    check_indices(&[i, j])?;
    let (minus, plus) = sides(a)?;
    let (i, j) = (i as usize, j as usize);
    let (pi, pj, pij) = (plus.gamma(i), plus.gamma(j), plus.gamma(i + j + 1));
    let (mi, mj) = (minus.gamma(i), minus.gamma(j));
    let first = Rational::new(
        BigInt::from(vec_factorial(&pi) * vec_factorial(&pj) * vec_factorial(&pij)),
        BigInt::from(vec_factorial(&(&pi + &pj)) * vec_factorial(&mi) * vec_factorial(&mj)),
    );
    let second = ratio(&pij, &(&mi + &mj));
    Ok(second - first)
}

/// Memoized evaluator of the general jump recursion at one value of `a`.
pub struct JumpRecursion {
    minus: Spectrum,
    plus: Spectrum,
    memo: RwLock<HashMap<Vec<u32>, Rational>>,
}

impl JumpRecursion {
    pub fn new(a: &Rational) -> Result<Self> {
        let (minus, plus) = sides(a)?;
        Ok(Self {
            minus,
            plus,
            memo: RwLock::new(HashMap::new()),
        })
    }

    /// `J(i_1,…,i_k)`: the leading factorial ratio minus the contributions
    /// through `s ≥ 2` intermediate outputs.
    pub fn jump(&self, indices: &[u32]) -> Result<Rational> {
        check_indices(indices)?;
        let mut key = indices.to_vec();
        key.sort_unstable();
        if let Some(v) = self.memo.read().expect("memo lock poisoned").get(&key) {
            return Ok(v.clone());
        }
        let k = key.len();
        let out_gamma = self.plus.gamma(target_index(&key) as usize);
        let minus_sum = lattice_sum(&key.iter().map(|&i| self.minus.gamma(i as usize)).collect::<Vec<_>>());
        let mut value = ratio(&out_gamma, &minus_sum);
        for sizes in partitions(k as u32).filter(|p| p.len() >= 2) {
            let sizes: Vec<usize> = sizes.into_iter().rev().map(|s| s as usize).collect();
            for sigma in ordered_shuffles(&sizes) {
                let mut prod = Rational::one();
                let mut outs = Vec::with_capacity(sizes.len());
                for block in sigma.blocks(&sizes) {
                    let sub: Vec<u32> = block.iter().map(|&p| key[p]).collect();
                    prod *= self.jump(&sub)?;
                    if prod.is_zero() {
                        break;
                    }
                    outs.push(self.plus.gamma(target_index(&sub) as usize));
                }
                if prod.is_zero() {
                    continue;
                }
                value -= prod * ratio(&out_gamma, &lattice_sum(&outs));
            }
        }
        self.memo
            .write()
            .expect("memo lock poisoned")
            .entry(key)
            .or_insert(value.clone());
        Ok(value)
    }
}

pub fn jump_general(a: &Rational, indices: &[u32]) -> Result<Rational> {
    JumpRecursion::new(a)?.jump(indices)
}

/// Reads the coefficient off `η_{a+} ∘ ε_{a-}` computed by the L∞ engine.
pub fn jump_via_xi(a: &Rational, indices: &[u32]) -> Result<Rational> {
    check_indices(indices)?;
    let x = xi::<Rational>(
        &SpectrumParams::plane(a.clone(), Side::Minus)?,
        &SpectrumParams::plane(a.clone(), Side::Plus)?,
        indices.len(),
    );
    let w = Word::from_letters(indices.iter().map(|&i| OrbitGen(i)).collect())
        .expect("even generators never vanish")
        .0;
    Ok(x.level(&w)?.coefficient_of(&OrbitGen(target_index(indices))))
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpHit {
    pub a: Rational,
    pub indices: Vec<u32>,
    pub value: Rational,
}

/// Nondecreasing tuples of length `k ≥ 2` with `Σi + k - 1 ≤ bound`.
fn index_tuples(bound: u32) -> Vec<Vec<u32>> {
    fn rec(min: u32, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>, bound: u32) {
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        for i in min..=budget {
            let next_total = cur.iter().sum::<u32>() + i + cur.len() as u32;
            if next_total > bound {
                break;
            }
            cur.push(i);
            rec(i, budget, cur, out, bound);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, bound, &mut Vec::new(), &mut out, bound);
    out
}

/// Every nonzero `k ≥ 2` jump with output index at most `bound`, over all
/// `a` in `J_1 ∪ ⋯ ∪ J_bound`. Each hit is checked against the energy
/// inequality `Σ_j A(o_{i_j}) ≥ A(o_{Σi+k-1})`; a violation is an error.
pub fn support_scan(bound: u32) -> Result<Vec<JumpHit>> {
    if bound < 2 {
        return Err(Error::InvalidParams("support scan needs bound >= 2".into()));
    }
    let tuples = index_tuples(bound);
    let mut hits = Vec::new();
    for a in jump_union(1..=bound) {
        let rec = JumpRecursion::new(&a)?;
        let at = Spectrum::new(SpectrumParams::plane(a.clone(), Side::Canonical)?);
        for t in &tuples {
            let value = rec.jump(t)?;
            if value.is_zero() {
                continue;
            }
            let input: Rational = t.iter().map(|&i| at.action(i as usize)).sum();
            let output = at.action(target_index(t) as usize);
            if input < output {
                return Err(Error::Invariant(format!(
                    "energy inequality fails for J({t:?}) at a = {a}: {input} < {output}"
                )));
            }
            hits.push(JumpHit {
                a: a.clone(),
                indices: t.clone(),
                value,
            });
        }
    }
    Ok(hits)
}

/// `T̃_d^a` for `CP²` through infinitesimal cobordisms:
/// `(1/d!) ⟨(Ξ^{1+}_a)^d(o_2^{⊙d}), o_{3d-1}⟩`, with `Ξ^{1+}_a` factored as
/// the alternating chain of connecting maps and jumps at every breakpoint
/// in `(1, a)`, and at `a` itself for the `Plus` side.
pub fn wt_t_via_jumps(d: u32, a: &Rational, side: Side) -> Result<Rational> {
    if d == 0 {
        return Err(Error::InvalidParams("degree must be positive".into()));
    }
    if a <= &Rational::one() {
        return Err(Error::InvalidParams(format!("need a > 1, got {a}")));
    }
    let top = 3 * d - 1;
    let mut breaks: Vec<Rational> = jump_union(1..=top)
        .into_iter()
        .filter(|b| b > &Rational::one() && (b < a || (b == a && side != Side::Minus)))
        .collect();
    breaks.dedup();

    let bound = d as usize;
    let mut x = crate::linf::Combination::word(
        Word::from_letters(vec![OrbitGen(2); d as usize]).expect("even").0,
        Rational::one(),
    );
    let mut current = SpectrumParams::plane(int(1), Side::Plus)?;
    for b in &breaks {
        let before = SpectrumParams::plane(b.clone(), Side::Minus)?;
        let after = SpectrumParams::plane(b.clone(), Side::Plus)?;
        x = push_forward(&xi::<Rational>(&current, &before, bound), &x)?;
        x = push_forward(&xi::<Rational>(&before, &after, bound), &x)?;
        current = after;
    }
    let end = SpectrumParams::plane(a.clone(), side)?;
    x = push_forward(&xi::<Rational>(&current, &end, bound), &x)?;
    let count = x.coefficient_of(&OrbitGen(top));
    Ok(count / Rational::from_integer(BigInt::from(factorial(d))))
}
