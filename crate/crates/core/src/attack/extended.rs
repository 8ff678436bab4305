//! Filtration beyond the direct range: run it on codes shortened at
//! subsets I_j and sum the results.

use std::collections::BTreeSet;

use crate::code::LinearCode;

use super::filtration::{
    run_algorithm_1, run_algorithm_2_with, Algorithm, Chain, Filtration, Regime,
};
use super::{init_filtration, AttackError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedPlan {
    /// Parameters of the unshortened code.
    pub regime: Regime,
    pub point: usize,
    pub subsets: Vec<Vec<usize>>,
    /// Computes B_target and B_{target+1}.
    pub target: usize,
    pub algorithm: Algorithm,
    pub chain: Chain,
}

/// With `i = max(1, 2m - n + 1)`, the smallest size for which the shortened
/// codes fall back into the direct range: the `i + 1` subsets obtained by
/// dropping one coordinate from the window of `i + 1` coordinates following
/// `p` cyclically.
pub fn default_subsets(n: usize, m: usize, p: usize) -> Result<Vec<Vec<usize>>, AttackError> {
    let i = (2 * m + 1).saturating_sub(n).max(1);
    if i + 1 >= n {
        return Err(AttackError::Subsets(format!(
            "window of size {} does not fit in length {n}",
            i + 1
        )));
    }
    let window: Vec<usize> = (p + 1..n).chain(0..p).take(i + 1).collect();
    Ok((0..=i)
        .map(|j| {
            let mut w = window.clone();
            w.remove(j);
            w
        })
        .collect())
}

fn check_subsets(plan: &ExtendedPlan, n: usize, k_deepest: usize) -> Result<(), AttackError> {
    let sets: Vec<BTreeSet<usize>> = plan
        .subsets
        .iter()
        .map(|s| s.iter().copied().collect())
        .collect();
    if sets.is_empty() {
        return Err(AttackError::Subsets("no subsets given".into()));
    }
    for s in &sets {
        if let Some(&bad) = s.iter().find(|&&i| i >= n || i == plan.point) {
            return Err(AttackError::Subsets(format!(
                "index {bad} is out of range or equals P"
            )));
        }
    }
    // Suffix intersections: suffix[j] = I_j ∩ ... ∩ I_s.
    let mut suffix = vec![BTreeSet::new(); sets.len() + 1];
    suffix[sets.len() - 1] = sets[sets.len() - 1].clone();
    for j in (0..sets.len() - 1).rev() {
        suffix[j] = sets[j].intersection(&suffix[j + 1]).copied().collect();
    }
    if !suffix[0].is_empty() {
        return Err(AttackError::Subsets(format!(
            "common intersection {:?} is not empty",
            suffix[0]
        )));
    }
    for j in 0..sets.len() - 1 {
        let lhs = k_deepest as i64 - sets[j].len() as i64;
        let rhs = suffix[j + 1].len() as i64 - suffix[j].len() as i64;
        if lhs < rhs {
            return Err(AttackError::Subsets(format!(
                "subset {} fails k - |I_j| >= |I_(j+1) ∩ ...| - |I_j ∩ ...| ({lhs} < {rhs})",
                j + 1
            )));
        }
    }
    Ok(())
}

/// B_target and B_{target+1} of `c` as sums over the shortened codes.
pub fn extended_filtration(c: &LinearCode, plan: &ExtendedPlan) -> Result<Filtration, AttackError> {
    let n = c.len();
    let k0 = c.dimension();
    let deepest = plan.target + 1;
    if deepest > k0 {
        return Err(AttackError::Guard(format!(
            "depth {deepest} exceeds k(C) = {k0}"
        )));
    }
    check_subsets(plan, n, k0 - deepest)?;
    let (b0, b1) = init_filtration(c, plan.point)?;
    let mut out = Filtration::new(&b0, &b1, plan.algorithm);
    let mut sums = [
        LinearCode::zero(c.field(), n),
        LinearCode::zero(c.field(), n),
    ];
    for subset in &plan.subsets {
        let sub = c.shorten(subset)?;
        let i = subset.len();
        let regime = Regime {
            n: plan.regime.n - i,
            g: plan.regime.g,
            m: plan
                .regime
                .m
                .checked_sub(i)
                .ok_or_else(|| AttackError::Subsets(format!("subset of size {i} exceeds m")))?,
        };
        let (s0, s1) = init_filtration(&sub, plan.point)?;
        let f = match plan.algorithm {
            Algorithm::One => run_algorithm_1(&s0, &s1, &regime, plan.target)?,
            Algorithm::Two => run_algorithm_2_with(&s0, &s1, &regime, plan.target, plan.chain)?,
        };
        out.lambda += f.lambda;
        out.solve_times.extend(f.solve_times.iter().copied());
        for (slot, s) in sums.iter_mut().zip([plan.target, deepest]) {
            *slot = slot.sum(f.get(s).expect("driver computes target and target + 1"))?;
        }
    }
    for (code, s) in sums.into_iter().zip([plan.target, deepest]) {
        if code.dimension() != k0 - s {
            return Err(AttackError::DimensionDrop {
                s,
                got: code.dimension(),
                expected: k0 - s,
            });
        }
        out.codes.insert(s, code);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agcode::{ag_code, oracle_filtration};
    use crate::curve::OnePointCurve;

    #[test]
    fn windows() {
        assert_eq!(
            default_subsets(27, 14, 0).unwrap(),
            vec![vec![2, 3], vec![1, 3], vec![1, 2]]
        );
        assert_eq!(default_subsets(10, 3, 8).unwrap(), vec![vec![0], vec![9]]);
        assert!(default_subsets(8, 7, 0).is_err());
    }

    fn check_against_oracle(r: u32, m: usize, algorithm: Algorithm) {
        let curve = OnePointCurve::hermitian(r).unwrap();
        let (n, g) = (curve.len(), curve.genus());
        let regime = Regime { n, g, m };
        assert!(regime.direct().is_err());
        let c = ag_code(&curve, m).unwrap();
        let target = (m + 1 - 3 * g) / 2 + g;
        let plan = ExtendedPlan {
            regime,
            point: 0,
            subsets: default_subsets(n, m, 0).unwrap(),
            target,
            algorithm,
            chain: Chain::Target,
        };
        let f = extended_filtration(&c, &plan).unwrap();
        for s in [target, target + 1] {
            assert_eq!(
                f.get(s).unwrap(),
                &oracle_filtration(&curve, m, 0, s).unwrap()
            );
        }
    }

    #[test]
    fn beyond_direct_range() {
        check_against_oracle(3, 14, Algorithm::Two);
        check_against_oracle(3, 15, Algorithm::Two);
        check_against_oracle(4, 32, Algorithm::One);
        check_against_oracle(4, 36, Algorithm::Two);
    }

    #[test]
    fn agrees_with_direct_route() {
        let curve = OnePointCurve::hermitian(4).unwrap();
        let (n, g, m) = (64, 6, 30);
        let c = ag_code(&curve, m).unwrap();
        let plan = ExtendedPlan {
            regime: Regime { n, g, m },
            point: 0,
            subsets: vec![vec![1, 2, 3], vec![4, 5, 6]],
            target: 12,
            algorithm: Algorithm::Two,
            chain: Chain::Target,
        };
        let f = extended_filtration(&c, &plan).unwrap();
        assert_eq!(
            f.get(13).unwrap(),
            &oracle_filtration(&curve, m, 0, 13).unwrap()
        );
        // A single empty subset is the direct route.
        let single = ExtendedPlan {
            subsets: vec![vec![]],
            ..plan.clone()
        };
        let f = extended_filtration(&c, &single).unwrap();
        assert_eq!(
            f.get(12).unwrap(),
            &oracle_filtration(&curve, m, 0, 12).unwrap()
        );
        let overlapping = ExtendedPlan {
            subsets: vec![vec![1, 2], vec![2, 3]],
            ..plan
        };
        assert!(matches!(
            extended_filtration(&c, &overlapping),
            Err(AttackError::Subsets(_))
        ));
    }
}
