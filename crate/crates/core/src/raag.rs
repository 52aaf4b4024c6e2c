//! Arithmetic in a right-angled Artin group and in its automorphism group.
//!
//! Elements are words over signed generators. [`normalize`] produces the
//! shortlex-least freely reduced representative, so two words denote the same
//! group element exactly when their normal forms coincide. Automorphisms are
//! stored as the normal forms of the images of the generators.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Default cap on intermediate word lengths.
pub const DEFAULT_WORD_CAP: usize = 10_000;

/// A generator or its inverse. Letters order by vertex, then positive before
/// negative.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub vertex: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(vertex: usize) -> Self {
        Letter { vertex, inverse: false }
    }

    pub fn neg(vertex: usize) -> Self {
        Letter { vertex, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter {
            vertex: self.vertex,
            inverse: !self.inverse,
        }
    }
}

/// A word in the generators. Not necessarily reduced.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn generator(v: usize) -> Self {
        Word(vec![Letter::pos(v)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Parses whitespace-separated vertex names, each optionally followed by
    /// `^-1`.
    pub fn parse(g: &Graph, text: &str) -> Result<Word> {
        text.split_whitespace()
            .map(|tok| match tok.strip_suffix("^-1") {
                Some(name) => g.vertex(name).map(Letter::neg),
                None => g.vertex(tok).map(Letter::pos),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> WordDisplay<'a> {
        WordDisplay { word: self, graph: g }
    }

    fn check_vertices(&self, g: &Graph) -> Result<()> {
        match self.0.iter().find(|l| l.vertex >= g.len()) {
            Some(l) => Err(Error::UnknownVertex(l.vertex.to_string())),
            None => Ok(()),
        }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    graph: &'a Graph,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.word.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.graph.name(l.vertex))?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// Normal form of `w`: freely reduced up to commutation, then the
/// lexicographically least arrangement of the surviving letters.
pub fn normalize(g: &Graph, w: &Word) -> Result<Word> {
    normalize_capped(g, w, DEFAULT_WORD_CAP)
}

pub fn normalize_capped(g: &Graph, w: &Word, cap: usize) -> Result<Word> {
    if w.len() > cap {
        return Err(Error::WordTooLong { len: w.len(), cap });
    }
    w.check_vertices(g)?;
    Ok(lex_least(g, reduce(g, &w.0)))
}

/// Appends letters one at a time, cancelling each against the nearest
/// inverse it can commute back to. Appending to a reduced word this way
/// keeps it reduced.
fn reduce(g: &Graph, letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &y in letters {
        let link = g.link(y.vertex);
        let mut cancelled = false;
        for j in (0..out.len()).rev() {
            if out[j] == y.inv() {
                out.remove(j);
                cancelled = true;
                break;
            }
            if !link.contains(out[j].vertex) {
                break;
            }
        }
        if !cancelled {
            out.push(y);
        }
    }
    out
}

/// Repeatedly extracts the least letter that commutes past everything before
/// it.
fn lex_least(g: &Graph, mut rest: Vec<Letter>) -> Word {
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut before = VertexSet::EMPTY;
        let mut best: Option<usize> = None;
        for (i, l) in rest.iter().enumerate() {
            if before.is_subset(g.link(l.vertex)) && best.is_none_or(|b| *l < rest[b]) {
                best = Some(i);
            }
            before.insert(l.vertex);
            if before == g.vertices() {
                // Nothing later can commute past every vertex.
                break;
            }
        }
        let i = best.expect("first letter is always movable");
        out.push(rest.remove(i));
    }
    Word(out)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A Laurence generator of the automorphism group.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GeneratorSymbol {
    /// `v ↦ v⁻¹`.
    Inversion(usize),
    /// Right: `moved ↦ moved · acting`; left: `moved ↦ acting · moved`.
    Transvection { side: Side, acting: usize, moved: usize },
    /// `u ↦ acting · u · acting⁻¹` for every `u` in `conjugated`.
    PartialConjugation { acting: usize, conjugated: VertexSet },
}

impl GeneratorSymbol {
    /// Checks that the symbol defines an automorphism of `A_g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let n = g.len();
        let bad = |msg: String| Err(Error::MalformedGenerator(msg));
        match *self {
            GeneratorSymbol::Inversion(v) if v >= n => bad(format!("inversion of vertex {v}")),
            GeneratorSymbol::Inversion(_) => Ok(()),
            GeneratorSymbol::Transvection { acting, moved, .. } => {
                if acting >= n || moved >= n {
                    return bad("transvection vertex out of range".into());
                }
                if acting == moved {
                    return bad(format!("transvection of {} by itself", g.name(acting)));
                }
                if !g.link(moved).is_subset(g.star(acting)) {
                    return bad(format!(
                        "lk({}) is not contained in st({})",
                        g.name(moved),
                        g.name(acting)
                    ));
                }
                Ok(())
            }
            GeneratorSymbol::PartialConjugation { acting, conjugated } => {
                if acting >= n || !conjugated.is_subset(g.vertices()) {
                    return bad("partial conjugation vertex out of range".into());
                }
                let outside = g.vertices().difference(g.star(acting));
                if !conjugated.is_subset(outside) {
                    return bad(format!("conjugated set meets st({})", g.name(acting)));
                }
                let split = g
                    .components(outside)
                    .into_iter()
                    .any(|c| c.intersects(conjugated) && !c.is_subset(conjugated));
                if split {
                    return bad(format!(
                        "conjugated set is not a union of components of the complement of st({})",
                        g.name(acting)
                    ));
                }
                Ok(())
            }
        }
    }

    /// Image of vertex `u`, optionally under the inverse automorphism.
    fn image(&self, u: usize, inverted: bool) -> Word {
        match *self {
            GeneratorSymbol::Inversion(v) if v == u => Word::letter(Letter::neg(u)),
            GeneratorSymbol::Transvection { side, acting, moved } if moved == u => {
                let a = Letter {
                    vertex: acting,
                    inverse: inverted,
                };
                match side {
                    Side::Right => Word(vec![Letter::pos(u), a]),
                    Side::Left => Word(vec![a, Letter::pos(u)]),
                }
            }
            GeneratorSymbol::PartialConjugation { acting, conjugated } if conjugated.contains(u) => {
                let a = Letter {
                    vertex: acting,
                    inverse: inverted,
                };
                Word(vec![a, Letter::pos(u), a.inv()])
            }
            _ => Word::generator(u),
        }
    }

    pub fn describe(&self, g: &Graph) -> String {
        match *self {
            GeneratorSymbol::Inversion(v) => format!("inv({})", g.name(v)),
            GeneratorSymbol::Transvection { side, acting, moved } => {
                let s = match side {
                    Side::Right => "rho",
                    Side::Left => "lambda",
                };
                format!("{s}({} by {})", g.name(moved), g.name(acting))
            }
            GeneratorSymbol::PartialConjugation { acting, conjugated } => {
                format!("pi({} on {{{}}})", g.name(acting), g.set_names(conjugated).join(","))
            }
        }
    }
}

/// How an automorphism was obtained; drives [`Automorphism::inverse`].
#[derive(Clone, PartialEq, Eq, Debug)]
enum Provenance {
    /// `g1 ∘ g2 ∘ … ∘ gk`; the flag marks inverted factors.
    Generators(Vec<(GeneratorSymbol, bool)>),
    /// Conjugation `u ↦ w u w⁻¹`.
    Inner(Word),
    /// Built from raw images; invertibility not verified.
    Raw,
}

/// An endomorphism of `A_Γ` given by generator images.
#[derive(Clone, Debug)]
pub struct Automorphism {
    graph: Arc<Graph>,
    images: Vec<Word>,
    provenance: Provenance,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        same_graph(&self.graph, &other.graph) && self.images == other.images
    }
}

fn same_graph(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Automorphism {
    pub fn identity(graph: Arc<Graph>) -> Self {
        let images = (0..graph.len()).map(Word::generator).collect();
        Automorphism {
            graph,
            images,
            provenance: Provenance::Generators(Vec::new()),
        }
    }

    pub fn from_generator(graph: Arc<Graph>, sym: GeneratorSymbol) -> Result<Self> {
        sym.validate(&graph)?;
        let images = (0..graph.len()).map(|u| sym.image(u, false)).collect();
        Ok(Automorphism {
            graph,
            images,
            provenance: Provenance::Generators(vec![(sym, false)]),
        })
    }

    fn from_inverse_generator(graph: Arc<Graph>, sym: GeneratorSymbol) -> Self {
        let images = (0..graph.len())
            .map(|u| normalize(&graph, &sym.image(u, true)).expect("short word"))
            .collect();
        Automorphism {
            graph,
            images,
            provenance: Provenance::Generators(vec![(sym, true)]),
        }
    }

    /// Conjugation by `w`: `u ↦ w u w⁻¹`.
    pub fn conjugation(graph: Arc<Graph>, w: &Word) -> Result<Self> {
        let w = normalize(&graph, w)?;
        let images = (0..graph.len())
            .map(|u| normalize(&graph, &w.concat(&Word::generator(u)).concat(&w.inverse())))
            .collect::<Result<_>>()?;
        Ok(Automorphism {
            graph,
            images,
            provenance: Provenance::Inner(w),
        })
    }

    /// Builds an endomorphism from explicit images. Fails unless the images
    /// respect every commutation relation; invertibility is not checked.
    pub fn from_images(graph: Arc<Graph>, images: Vec<Word>) -> Result<Self> {
        if images.len() != graph.len() {
            return Err(Error::GraphMismatch);
        }
        let images = images.iter().map(|w| normalize(&graph, w)).collect::<Result<_>>()?;
        let f = Automorphism {
            graph,
            images,
            provenance: Provenance::Raw,
        };
        if !f.is_homomorphism()? {
            return Err(Error::Precondition(
                "images do not satisfy the commutation relations".into(),
            ));
        }
        Ok(f)
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn image(&self, v: usize) -> &Word {
        &self.images[v]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Whether invertibility is known from how the map was built.
    pub fn is_verified_invertible(&self) -> bool {
        !matches!(self.provenance, Provenance::Raw)
    }

    /// Every edge relation `[u, v] = 1` maps to a trivial commutator.
    pub fn is_homomorphism(&self) -> Result<bool> {
        for (u, v) in self.graph.edges() {
            let (a, b) = (&self.images[u], &self.images[v]);
            let comm = a.concat(b).concat(&a.inverse()).concat(&b.inverse());
            if !normalize(&self.graph, &comm)?.is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Letter-wise substitution followed by normalization.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        w.check_vertices(&self.graph).map_err(|_| Error::GraphMismatch)?;
        let mut out = Vec::new();
        for l in &w.0 {
            let img = &self.images[l.vertex];
            if l.inverse {
                out.extend(img.0.iter().rev().map(|x| x.inv()));
            } else {
                out.extend_from_slice(&img.0);
            }
            if out.len() > DEFAULT_WORD_CAP {
                return Err(Error::WordTooLong {
                    len: out.len(),
                    cap: DEFAULT_WORD_CAP,
                });
            }
        }
        normalize(&self.graph, &Word(out))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if !same_graph(&self.graph, &other.graph) {
            return Err(Error::GraphMismatch);
        }
        let images = other.images.iter().map(|w| self.apply(w)).collect::<Result<_>>()?;
        let provenance = match (&self.provenance, &other.provenance) {
            (Provenance::Generators(a), Provenance::Generators(b)) => {
                Provenance::Generators(a.iter().chain(b).copied().collect())
            }
            _ => Provenance::Raw,
        };
        Ok(Automorphism {
            graph: Arc::clone(&self.graph),
            images,
            provenance,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(v, w)| w.0 == [Letter::pos(v)])
    }

    /// The inverse, when the construction history makes it available.
    pub fn inverse(&self) -> Option<Result<Automorphism>> {
        match &self.provenance {
            Provenance::Generators(history) => {
                let mut acc = Automorphism::identity(Arc::clone(&self.graph));
                for &(sym, inverted) in history.iter().rev() {
                    let step = if inverted {
                        Automorphism::from_generator(Arc::clone(&self.graph), sym)
                    } else {
                        Ok(Automorphism::from_inverse_generator(Arc::clone(&self.graph), sym))
                    };
                    acc = match step.and_then(|s| acc.compose(&s)) {
                        Ok(a) => a,
                        Err(e) => return Some(Err(e)),
                    };
                }
                Some(Ok(acc))
            }
            Provenance::Inner(w) => Some(Automorphism::conjugation(Arc::clone(&self.graph), &w.inverse())),
            Provenance::Raw => None,
        }
    }

    /// Whether `self` and `other` commute, compared on generator images.
    pub fn commutes_with(&self, other: &Automorphism) -> Result<bool> {
        Ok(self.compose(other)? == other.compose(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge() -> Arc<Graph> {
        Arc::new(Graph::complete(2))
    }

    fn w(g: &Graph, s: &str) -> Word {
        Word::parse(g, s).unwrap()
    }

    fn show(g: &Graph, word: &Word) -> String {
        word.display(g).to_string()
    }

    #[test]
    fn normalize_examples() {
        let e = edge();
        assert_eq!(show(&e, &normalize(&e, &w(&e, "b a")).unwrap()), "a b");
        let p3 = Graph::path(3);
        assert!(normalize(&p3, &w(&p3, "a a^-1")).unwrap().is_empty());
        assert_eq!(show(&p3, &normalize(&p3, &w(&p3, "c a")).unwrap()), "c a");
        // Cancellation across a commuting letter.
        assert_eq!(show(&p3, &normalize(&p3, &w(&p3, "b a b^-1")).unwrap()), "a");
        assert_eq!(show(&p3, &normalize(&p3, &w(&p3, "a c a^-1")).unwrap()), "a c a^-1");
    }

    #[test]
    fn cancellation_past_noncommuting_block() {
        // a commutes with b and c, b and c do not commute: a c b a^-1 = c b.
        let g = Graph::lettered(3, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(show(&g, &normalize(&g, &w(&g, "a c b a^-1")).unwrap()), "c b");
    }

    #[test]
    fn word_cap() {
        let g = Graph::discrete(1);
        let long = Word(vec![Letter::pos(0); DEFAULT_WORD_CAP + 1]);
        assert!(matches!(normalize(&g, &long), Err(Error::WordTooLong { .. })));
    }

    #[test]
    fn generator_images() {
        let e = edge();
        let rho = Automorphism::from_generator(
            e.clone(),
            GeneratorSymbol::Transvection {
                side: Side::Right,
                acting: 1,
                moved: 0,
            },
        )
        .unwrap();
        assert_eq!(show(&e, rho.image(0)), "a b");
        assert_eq!(show(&e, &rho.apply(&w(&e, "a a")).unwrap()), "a a b b");
        let rho2 = rho.compose(&rho).unwrap();
        assert_eq!(show(&e, rho2.image(0)), "a b b");

        let iota = Automorphism::from_generator(e.clone(), GeneratorSymbol::Inversion(0)).unwrap();
        assert_eq!(show(&e, iota.image(0)), "a^-1");
        assert_eq!(show(&e, &iota.apply(&w(&e, "a^-1")).unwrap()), "a");
        assert!(iota.compose(&iota).unwrap().is_identity());
        assert!(!iota.is_identity());

        let pc = Automorphism::from_generator(
            e.clone(),
            GeneratorSymbol::PartialConjugation {
                acting: 0,
                conjugated: VertexSet::EMPTY,
            },
        )
        .unwrap();
        assert!(pc.is_identity());
    }

    #[test]
    fn identity_is_neutral() {
        let p3 = Arc::new(Graph::path(3));
        let id = Automorphism::identity(p3.clone());
        let word = w(&p3, "c b a b^-1");
        assert_eq!(id.apply(&word).unwrap(), normalize(&p3, &word).unwrap());
        let f = Automorphism::from_generator(
            p3.clone(),
            GeneratorSymbol::Transvection {
                side: Side::Left,
                acting: 2,
                moved: 0,
            },
        )
        .unwrap();
        assert_eq!(f.compose(&id).unwrap(), f);
        assert_eq!(id.compose(&f).unwrap(), f);
    }

    #[test]
    fn full_partial_conjugation_is_inner() {
        // P4 a-b-c-d, v = a: complement of st(a) is {c, d}.
        let g = Arc::new(Graph::path(4));
        let pc = Automorphism::from_generator(
            g.clone(),
            GeneratorSymbol::PartialConjugation {
                acting: 0,
                conjugated: g.vertex_set(&["c", "d"]).unwrap(),
            },
        )
        .unwrap();
        let conj = Automorphism::from_images(
            g.clone(),
            (0..4)
                .map(|u| Word(vec![Letter::neg(0), Letter::pos(u), Letter::pos(0)]))
                .collect(),
        )
        .unwrap();
        assert!(!conj.is_verified_invertible());
        assert!(conj.compose(&pc).unwrap().is_identity());
        assert!(pc.compose(&conj).unwrap().is_identity());
    }

    #[test]
    fn malformed_generators() {
        let p3 = Arc::new(Graph::path(3));
        let self_tv = GeneratorSymbol::Transvection {
            side: Side::Right,
            acting: 0,
            moved: 0,
        };
        assert!(matches!(
            Automorphism::from_generator(p3.clone(), self_tv),
            Err(Error::MalformedGenerator(_))
        ));
        // lk(b) = {a, c} is not inside st(a) = {a, b}.
        let bad = GeneratorSymbol::Transvection {
            side: Side::Right,
            acting: 0,
            moved: 1,
        };
        assert!(Automorphism::from_generator(p3.clone(), bad).is_err());
        let meets_star = GeneratorSymbol::PartialConjugation {
            acting: 0,
            conjugated: VertexSet::singleton(1),
        };
        assert!(Automorphism::from_generator(p3.clone(), meets_star).is_err());
    }

    #[test]
    fn inverses_from_history() {
        let g = Arc::new(Graph::lettered(4, &[(0, 1), (1, 2)]).unwrap());
        let f = Automorphism::from_generator(
            g.clone(),
            GeneratorSymbol::Transvection {
                side: Side::Right,
                acting: 1,
                moved: 0,
            },
        )
        .unwrap();
        let h = Automorphism::from_generator(
            g.clone(),
            GeneratorSymbol::PartialConjugation {
                acting: 3,
                conjugated: g.vertex_set(&["a", "b", "c"]).unwrap(),
            },
        )
        .unwrap();
        let fh = f.compose(&h).unwrap();
        let inv = fh.inverse().unwrap().unwrap();
        assert!(fh.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&fh).unwrap().is_identity());
        let raw = Automorphism::from_images(g.clone(), fh.images().to_vec()).unwrap();
        assert!(raw.inverse().is_none());
    }

    #[test]
    fn non_homomorphism_rejected() {
        let p3 = Arc::new(Graph::path(3));
        let imgs = vec![w(&p3, "a"), w(&p3, "c"), w(&p3, "a")];
        // b -> c does not commute with a -> a.
        assert!(Automorphism::from_images(p3, imgs).is_err());
    }
}
