//! Canonical forms and isomorphism for wiring diagrams.
//!
//! Two diagrams are isomorphic when some vertex bijection preserves arrows
//! and state vectors exactly; vertex and arrow ids carry no meaning. The
//! canonical key is computed by sorted label-multiset refinement followed by
//! an exhaustive minimization over bijections among same-signature vertices,
//! which is cheap on the small diagrams the edit metric deals with. The
//! sensor catalog is deliberately ignored: declaring extra sensors does not
//! change a diagram's identity.

use crate::wd::{Label, WiringDiagram};
use std::collections::BTreeMap;

/// A total, iso-invariant encoding of a wiring diagram: for each vertex in
/// canonical position, its sorted state vector and the sorted positions of
/// its successors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<(Vec<Label>, Vec<usize>)>);

/// Computes the canonical key of a diagram.
pub fn canonical_key(w: &WiringDiagram) -> CanonicalKey {
    let vertices: Vec<_> = w.graph().vertices().cloned().collect();
    let n = vertices.len();
    if n == 0 {
        return CanonicalKey(Vec::new());
    }
    let index: BTreeMap<_, _> = vertices.iter().cloned().zip(0..).collect();

    let labels: Vec<Vec<Label>> = vertices
        .iter()
        .map(|v| {
            w.state_vector(v)
                .map(|set| set.iter().cloned().collect())
                .unwrap_or_default()
        })
        .collect();

    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (_, a) in w.graph().arrows() {
        let (s, t) = (index[&a.src], index[&a.dst]);
        succ[s].push(t);
        pred[t].push(s);
    }

    // Refinement: start from label-set colors, repeatedly split classes by
    // the multiset of neighbor colors until stable. Color ranks are assigned
    // by sorting signatures, so they depend only on iso-invariant data.
    let mut colors: Vec<usize> = rank_by(&labels, |l| l.clone());
    loop {
        let signatures: Vec<(usize, Vec<(u8, usize)>)> = (0..n)
            .map(|i| {
                let mut nbrs: Vec<(u8, usize)> = succ[i]
                    .iter()
                    .map(|&j| (0u8, colors[j]))
                    .chain(pred[i].iter().map(|&j| (1u8, colors[j])))
                    .collect();
                nbrs.sort_unstable();
                (colors[i], nbrs)
            })
            .collect();
        let next = rank_by(&signatures, |s| s.clone());
        if next == colors {
            break;
        }
        colors = next;
    }

    // Candidate orderings: classes in color order, vertices permuted within
    // each class. Distinct colors almost always split everything, so the
    // permutation product stays tiny.
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in colors.iter().enumerate() {
        classes.entry(c).or_default().push(i);
    }
    let class_list: Vec<Vec<usize>> = classes.into_values().collect();

    let mut best: Option<CanonicalKey> = None;
    let perms: Vec<Vec<Vec<usize>>> = class_list.iter().map(|c| permutations(c)).collect();
    let mut odometer = vec![0usize; perms.len()];
    loop {
        let mut position = vec![0usize; n];
        let mut at = 0usize;
        for (ci, perm_set) in perms.iter().enumerate() {
            for &v in &perm_set[odometer[ci]] {
                position[v] = at;
                at += 1;
            }
        }
        let mut encoded: Vec<(Vec<Label>, Vec<usize>)> = vec![(Vec::new(), Vec::new()); n];
        for v in 0..n {
            let mut outs: Vec<usize> = succ[v].iter().map(|&u| position[u]).collect();
            outs.sort_unstable();
            encoded[position[v]] = (labels[v].clone(), outs);
        }
        let key = CanonicalKey(encoded);
        if best.as_ref().map_or(true, |b| key < *b) {
            best = Some(key);
        }

        let mut carry = 0usize;
        loop {
            if carry == perms.len() {
                return best.expect("at least one ordering considered");
            }
            odometer[carry] += 1;
            if odometer[carry] < perms[carry].len() {
                break;
            }
            odometer[carry] = 0;
            carry += 1;
        }
    }
}

/// True when a vertex bijection preserving arrows and state vectors exists.
pub fn wd_isomorphic(a: &WiringDiagram, b: &WiringDiagram) -> bool {
    if a.graph().vertex_count() != b.graph().vertex_count()
        || a.graph().arrow_pairs().len() != b.graph().arrow_pairs().len()
    {
        return false;
    }
    canonical_key(a) == canonical_key(b)
}

fn rank_by<T, K: Ord + Clone>(items: &[T], key: impl Fn(&T) -> K) -> Vec<usize> {
    let mut distinct: Vec<K> = items.iter().map(&key).collect();
    distinct.sort();
    distinct.dedup();
    items
        .iter()
        .map(|item| {
            distinct
                .binary_search_by(|probe| probe.cmp(&key(item)))
                .expect("key present")
        })
        .collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &head) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::sensor::SensorSet;
    use crate::wd::testkit::{coffee_chain, coffee_sensors, coffee_wd, labeled_chain};
    use crate::wd::Label;

    /// Rebuilds a diagram with every vertex id replaced.
    fn renamed(w: &WiringDiagram) -> WiringDiagram {
        let json = w
            .to_json()
            .replace("enter", "n1")
            .replace("pay", "n2")
            .replace("receive", "n3")
            .replace("exit", "n4");
        WiringDiagram::from_json(&json).unwrap()
    }

    #[test]
    fn renaming_vertices_preserves_the_key() {
        let w = coffee_wd();
        let r = renamed(&w);
        assert_ne!(w, r);
        assert!(wd_isomorphic(&w, &r));
        assert_eq!(canonical_key(&w), canonical_key(&r));
    }

    #[test]
    fn the_two_coffee_chains_are_not_isomorphic() {
        // Same label multiset, same shape; the order of pay and receive
        // along the chain differs.
        assert!(!wd_isomorphic(&coffee_chain(true), &coffee_chain(false)));
    }

    #[test]
    fn diamond_vs_chain_differ() {
        assert!(!wd_isomorphic(&coffee_wd(), &coffee_chain(true)));
    }

    #[test]
    fn extra_sensor_declarations_do_not_matter() {
        let w = coffee_wd();
        let mut bigger = coffee_sensors();
        bigger
            .insert(crate::wd::testkit::bit_sensor("unused"))
            .unwrap();
        let mut w2 = WiringDiagram::new(bigger);
        for (v, labels) in w.state_vectors() {
            w2.add_vertex(v.clone(), labels.iter().cloned()).unwrap();
        }
        for (_, a) in w.graph().arrows() {
            w2.connect(a.src.clone(), a.dst.clone()).unwrap();
        }
        assert!(wd_isomorphic(&w, &w2));
    }

    #[test]
    fn same_labels_on_interchangeable_vertices() {
        // Two vertices with identical labels and no arrows: permuting them
        // must not change the key.
        let mut a = WiringDiagram::new(coffee_sensors());
        a.add_vertex("x", [Label::at_point("dF1", 1)]).unwrap();
        a.add_vertex("y", [Label::at_point("dF1", 1)]).unwrap();
        let mut b = WiringDiagram::new(coffee_sensors());
        b.add_vertex("y", [Label::at_point("dF1", 1)]).unwrap();
        b.add_vertex("x", [Label::at_point("dF1", 1)]).unwrap();
        assert!(wd_isomorphic(&a, &b));

        let mut c = WiringDiagram::new(coffee_sensors());
        c.add_vertex("x", [Label::at_point("dF1", 1)]).unwrap();
        c.add_vertex("y", [Label::at_point("dF1", 1)]).unwrap();
        c.connect("x", "y").unwrap();
        assert!(!wd_isomorphic(&a, &c));
    }

    #[test]
    fn empty_diagrams_are_isomorphic() {
        let a = WiringDiagram::new(SensorSet::new());
        let b = WiringDiagram::new(coffee_sensors());
        assert!(wd_isomorphic(&a, &b));
    }

    #[test]
    fn canonical_equality_matches_backtracking_on_small_diagrams() {
        let pool = [
            coffee_wd(),
            coffee_chain(true),
            coffee_chain(false),
            labeled_chain(&[("F1", 1), ("F1", 1)]),
            labeled_chain(&[("F1", 1), ("F2", 1)]),
            labeled_chain(&[("F2", 1), ("F1", 1)]),
            labeled_chain(&[("F1", 1)]),
        ];
        for a in &pool {
            for b in &pool {
                assert_eq!(
                    wd_isomorphic(a, b),
                    oracle::isomorphic_by_backtracking(a, b),
                );
            }
        }
    }
}
