use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::finitegroups::{elem_mul, Elem, Factor, SubgroupClosure};

use super::ImageError;

/// Goursat data for `U ⊆ G₁ × G₂` where the first `split` ambient factors
/// form `G₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoursatResult {
    Full,
    Graph {
        /// `{x : (x, 1) ∈ U}`, sorted.
        n1: Vec<Elem>,
        /// `{y : (1, y) ∈ U}`, sorted.
        n2: Vec<Elem>,
        /// The isomorphism `G₁/N₁ ≅ G₂/N₂` as pairs of minimal coset representatives.
        iso: Vec<(Elem, Elem)>,
    },
    NotSurjectiveOntoFactors,
}

fn is_identity(x: &[crate::finitegroups::Mat2]) -> bool {
    x.iter().all(|m| *m == crate::finitegroups::Mat2::IDENTITY)
}

/// Minimal representative of each coset `xN` for `x` in `group`.
fn coset_reps(amb: &[Factor], group: &[Elem], n: &[Elem]) -> HashMap<Elem, Elem> {
    let mut sorted: Vec<&Elem> = group.iter().collect();
    sorted.sort();
    let mut rep = HashMap::with_capacity(group.len());
    for x in sorted {
        if rep.contains_key(x) {
            continue;
        }
        for m in n {
            rep.insert(elem_mul(amb, x, m), x.clone());
        }
    }
    rep
}

/// Classify `U` against target factor orders (defaults to the ambient factor
/// groups when `targets` is `None`).
pub fn goursat_classify(
    u: &SubgroupClosure,
    split: usize,
    targets: Option<(u128, u128)>,
) -> Result<GoursatResult, ImageError> {
    let els = u.elements()?;
    let amb = u.ambient();
    let (a1, a2) = (&amb[..split], &amb[split..]);
    let (t1, t2) = targets.unwrap_or_else(|| {
        (a1.iter().map(|f| f.order() as u128).product(), a2.iter().map(|f| f.order() as u128).product())
    });
    let g1: HashSet<Elem> = els.iter().map(|e| e[..split].to_vec()).collect();
    let g2: HashSet<Elem> = els.iter().map(|e| e[split..].to_vec()).collect();
    if g1.len() as u128 != t1 || g2.len() as u128 != t2 {
        return Ok(GoursatResult::NotSurjectiveOntoFactors);
    }
    if els.len() as u128 == t1 * t2 {
        return Ok(GoursatResult::Full);
    }
    let mut n1: Vec<Elem> = els.iter().filter(|e| is_identity(&e[split..])).map(|e| e[..split].to_vec()).collect();
    let mut n2: Vec<Elem> = els.iter().filter(|e| is_identity(&e[..split])).map(|e| e[split..].to_vec()).collect();
    n1.sort();
    n2.sort();
    let g1: Vec<Elem> = g1.into_iter().collect();
    let g2: Vec<Elem> = g2.into_iter().collect();
    let r1 = coset_reps(a1, &g1, &n1);
    let r2 = coset_reps(a2, &g2, &n2);
    let mut iso: Vec<(Elem, Elem)> = els
        .iter()
        .map(|e| (r1[&e[..split]].clone(), r2[&e[split..]].clone()))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    iso.sort();
    Ok(GoursatResult::Graph { n1, n2, iso })
}

/// Materialize `{(x·n₁, y·n₂)}` over the coset bijection.
pub fn goursat_reconstruct(ambient: &[Factor], split: usize, g: &GoursatResult) -> Option<HashSet<Elem>> {
    let GoursatResult::Graph { n1, n2, iso } = g else {
        return None;
    };
    let (a1, a2) = (&ambient[..split], &ambient[split..]);
    let mut out = HashSet::new();
    for (x, y) in iso {
        for m1 in n1 {
            let xm = elem_mul(a1, x, m1);
            for m2 in n2 {
                let mut e = xm.clone();
                e.extend(elem_mul(a2, y, m2));
                out.insert(e);
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitegroups::{closure, Constraint, FiniteRing, Mat2, DEFAULT_BOUND};
    use alloc::vec;

    fn sl2sq() -> Vec<Factor> {
        let f5 = FiniteRing::prime_field(5).unwrap();
        vec![Factor::new(f5.clone(), Constraint::SL2), Factor::new(f5, Constraint::SL2)]
    }

    #[test]
    fn diagonal_and_signed_graphs() {
        let s = Mat2::new(1, 1, 0, 1);
        let t = Mat2::new(1, 0, 1, 1);
        let m1 = Mat2::new(4, 0, 0, 4);
        let diag = closure(vec![vec![s, s], vec![t, t]], sl2sq(), DEFAULT_BOUND).unwrap();
        let g = goursat_classify(&diag, 1, None).unwrap();
        let GoursatResult::Graph { n1, n2, iso } = &g else { panic!() };
        assert_eq!((n1.len(), n2.len(), iso.len()), (1, 1, 120));
        assert!(iso.iter().all(|(x, y)| x == y));
        let rebuilt = goursat_reconstruct(diag.ambient(), 1, &g).unwrap();
        assert_eq!(rebuilt, diag.elements().unwrap().iter().cloned().collect());

        let pm = closure(vec![vec![s, s], vec![t, t], vec![Mat2::IDENTITY, m1]], sl2sq(), DEFAULT_BOUND).unwrap();
        let g = goursat_classify(&pm, 1, None).unwrap();
        let GoursatResult::Graph { n1, n2, iso } = &g else { panic!() };
        assert_eq!((n1.len(), n2.len(), iso.len()), (2, 2, 60));
        let rebuilt = goursat_reconstruct(pm.ambient(), 1, &g).unwrap();
        assert_eq!(rebuilt.len(), 240);

        let full = closure(
            vec![vec![s, Mat2::IDENTITY], vec![t, Mat2::IDENTITY], vec![Mat2::IDENTITY, s], vec![Mat2::IDENTITY, t]],
            sl2sq(),
            DEFAULT_BOUND,
        )
        .unwrap();
        assert_eq!(goursat_classify(&full, 1, None).unwrap(), GoursatResult::Full);
        let small = closure(vec![vec![s, s]], sl2sq(), DEFAULT_BOUND).unwrap();
        assert_eq!(goursat_classify(&small, 1, None).unwrap(), GoursatResult::NotSurjectiveOntoFactors);
    }
}
