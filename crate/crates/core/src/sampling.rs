//! Random fuzzy subsets and strictly increasing re-gradings.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::fuzzy::FuzzySubset;
use crate::grade::Grade;
use crate::group::{all_subgroups, AgGroup};

/// Denominator for sampled grades.
const SCALE: u64 = 1000;

fn random_grade<R: Rng + ?Sized>(rng: &mut R, pool: &[Grade]) -> Grade {
    *pool.choose(rng).expect("non-empty pool")
}

/// `k` distinct grades in `[0, 1]`, ascending.
pub fn distinct_grades<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<Grade> {
    assert!(k as u64 <= SCALE + 1);
    let mut picked = BTreeSet::new();
    while picked.len() < k {
        picked.insert(rng.gen_range(0..=SCALE));
    }
    picked.into_iter().map(|p| Grade::new(p, SCALE).expect("p <= SCALE")).collect()
}

/// A random fuzzy subset that is a fuzzy AG-subgroup about half the time.
///
/// Half the draws build a random subgroup chain with random descending
/// grades (always valid) and then, with probability 1/2, overwrite one grade;
/// the other half are uniform over a small grade pool.
pub fn random_fuzzy_subset<'g, R: Rng + ?Sized>(
    rng: &mut R,
    g: &'g AgGroup,
    subgroups: &[Vec<usize>],
) -> FuzzySubset<'g> {
    let n = g.order();
    let pool = [Grade::ZERO, Grade::halving(2), Grade::halving(1), Grade::new(3, 4).unwrap(), Grade::ONE];
    if rng.gen_bool(0.5) {
        let mut grades = (0..n).map(|_| random_grade(rng, &pool)).collect::<Vec<_>>();
        if rng.gen_bool(0.5) {
            // bias towards a maximal identity grade so some draws survive
            grades[g.identity()] = Grade::ONE;
        }
        return FuzzySubset::new(g, grades).expect("one grade per element");
    }
    // random chain, top-down from the whole group
    let mut chain = vec![subgroups.len() - 1];
    loop {
        let cur = &subgroups[*chain.last().unwrap()];
        let smaller: Vec<usize> = (0..subgroups.len())
            .filter(|&i| subgroups[i].len() < cur.len() && subgroups[i].iter().all(|x| cur.binary_search(x).is_ok()))
            .collect();
        if smaller.is_empty() || rng.gen_bool(0.3) {
            break;
        }
        chain.push(*smaller.choose(rng).unwrap());
    }
    chain.reverse();
    let levels = distinct_grades(rng, chain.len());
    let mut grades = vec![Grade::ZERO; n];
    let mut set = vec![false; n];
    for (depth, &si) in chain.iter().enumerate() {
        for &x in &subgroups[si] {
            if !set[x] {
                set[x] = true;
                grades[x] = levels[chain.len() - 1 - depth];
            }
        }
    }
    if rng.gen_bool(0.5) {
        let x = rng.gen_range(0..n);
        grades[x] = random_grade(rng, &pool);
    }
    FuzzySubset::new(g, grades).expect("one grade per element")
}

pub fn random_fuzzy_subsets<'g, R: Rng + ?Sized>(rng: &mut R, g: &'g AgGroup, count: usize) -> Vec<FuzzySubset<'g>> {
    let subgroups = all_subgroups(g);
    (0..count).map(|_| random_fuzzy_subset(rng, g, &subgroups)).collect()
}

/// A random strictly increasing map on the image of `mu`, applied to `mu`.
pub fn random_regrading<'g, R: Rng + ?Sized>(rng: &mut R, mu: &FuzzySubset<'g>) -> FuzzySubset<'g> {
    let image = mu.image();
    let targets = distinct_grades(rng, image.len());
    mu.map_grades(|g| targets[image.binary_search(&g).expect("grade is in the image")])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn regrading_is_strictly_increasing() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let k = fixtures::klein_four();
        let mu = FuzzySubset::new(&k, fixtures::klein_normal_grades()).unwrap();
        for _ in 0..50 {
            let r = random_regrading(&mut rng, &mu);
            for x in 0..4 {
                for y in 0..4 {
                    assert_eq!(mu.grade(x).cmp(&mu.grade(y)), r.grade(x).cmp(&r.grade(y)));
                }
            }
        }
    }

    #[test]
    fn samples_mix_valid_and_invalid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = fixtures::z4_subtraction();
        let subsets = random_fuzzy_subsets(&mut rng, &g, 400);
        let valid = subsets.iter().filter(|m| m.is_fuzzy_ag_subgroup().is_ok()).count();
        assert!(valid > 50 && valid < 350, "valid = {valid}");
    }
}
