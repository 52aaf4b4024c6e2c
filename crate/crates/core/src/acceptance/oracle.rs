//! Slow reference implementations used to cross-check the library.

use std::collections::{HashSet, VecDeque};

use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::raag::{normalize, Automorphism, Letter, Word};

/// Shortlex-least word reachable from `w` by swapping adjacent commuting
/// letters and deleting adjacent inverse pairs.
///
/// Explores the whole rewrite closure, so it does not depend on the order in
/// which rewrites are tried. Exponential; meant for short words.
pub fn closure_normal_form(g: &Graph, w: &Word) -> Word {
    let start = w.0.clone();
    let mut seen: HashSet<Vec<Letter>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    let mut best = start;
    while let Some(cur) = queue.pop_front() {
        if shortlex_less(&cur, &best) {
            best = cur.clone();
        }
        for i in 0..cur.len().saturating_sub(1) {
            let (x, y) = (cur[i], cur[i + 1]);
            let mut next = Vec::new();
            if x == y.inv() {
                let mut c = cur.clone();
                c.drain(i..i + 2);
                next.push(c);
            }
            if x.vertex != y.vertex && g.adjacent(x.vertex, y.vertex) {
                let mut c = cur.clone();
                c.swap(i, i + 1);
                next.push(c);
            }
            for c in next {
                if seen.insert(c.clone()) {
                    queue.push_back(c);
                }
            }
        }
    }
    Word(best)
}

fn shortlex_less(a: &[Letter], b: &[Letter]) -> bool {
    (a.len(), a) < (b.len(), b)
}

/// Whether `φ(A_Δ)` is conjugate into `A_Δ` by a conjugator of length at most
/// one, checked on normal forms of the images.
///
/// For a Laurence generator a single letter always suffices, so this decides
/// whether the generator preserves the conjugacy class of `A_Δ`.
pub fn preserves_by_images(phi: &Automorphism, delta: VertexSet) -> Result<bool> {
    let graph = phi.graph();
    let mut conjugators = vec![Word::empty()];
    for v in graph.vertices().iter() {
        conjugators.push(Word::letter(Letter::pos(v)));
        conjugators.push(Word::letter(Letter::neg(v)));
    }
    for c in conjugators {
        let mut inside = true;
        for u in delta.iter() {
            let img = c.concat(phi.image(u)).concat(&c.inverse());
            if !normalize(graph, &img)?.0.iter().all(|l| delta.contains(l.vertex)) {
                inside = false;
                break;
            }
        }
        if inside {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Every subset of `within`, by brute force.
pub fn subsets(within: VertexSet) -> impl Iterator<Item = VertexSet> {
    let members: Vec<usize> = within.iter().collect();
    (0u64..1 << members.len()).map(move |mask| {
        members
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(VertexSet::EMPTY, |s, (_, &v)| s.with(v))
    })
}

/// Largest clique size by checking every subset.
pub fn brute_force_clique_size(g: &Graph, within: VertexSet) -> usize {
    subsets(within)
        .filter(|&s| g.is_clique(s))
        .map(VertexSet::len)
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::raag::{GeneratorSymbol, Side};

    #[test]
    fn closure_handles_blocked_cancellation() {
        // a commutes with b and c; b, c do not commute. Order b < a < c.
        let g = Graph::new(&["b", "a", "c"], &[("a", "b"), ("a", "c")]).unwrap();
        let w = Word::parse(&g, "a c b a^-1").unwrap();
        let nf = closure_normal_form(&g, &w);
        assert_eq!(nf.display(&g).to_string(), "c b");
        assert_eq!(nf, normalize(&g, &w).unwrap());
    }

    #[test]
    fn closure_of_free_word_is_itself() {
        let g = Graph::discrete(2);
        let w = Word::parse(&g, "a b a^-1").unwrap();
        assert_eq!(closure_normal_form(&g, &w), w);
    }

    #[test]
    fn preservation_by_images() {
        let g = Arc::new(Graph::discrete(3));
        let preserves = |sym, delta| {
            let phi = Automorphism::from_generator(Arc::clone(&g), sym).unwrap();
            preserves_by_images(&phi, delta).unwrap()
        };
        let (a, b, c) = (0, 1, 2);
        let ab = VertexSet::singleton(a).with(b);
        let pc = |acting, conj: &[usize]| GeneratorSymbol::PartialConjugation {
            acting,
            conjugated: conj.iter().fold(VertexSet::EMPTY, |s, &v| s.with(v)),
        };
        assert!(preserves(pc(c, &[a, b]), ab));
        assert!(!preserves(pc(c, &[a]), ab));
        assert!(preserves(pc(a, &[b]), ab));
        let t = GeneratorSymbol::Transvection {
            side: Side::Right,
            acting: c,
            moved: a,
        };
        assert!(!preserves(t, ab));
        assert!(preserves(t, VertexSet::singleton(b)));
    }

    #[test]
    fn subsets_enumerates_power_set() {
        let s = VertexSet::singleton(1).with(3).with(4);
        let all: HashSet<u64> = subsets(s).map(VertexSet::bits).collect();
        assert_eq!(all.len(), 8);
    }
}
