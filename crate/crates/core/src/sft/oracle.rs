//! Brute-force action on points of a full shift, independent of table composition.

use super::{Graph, SftError, TabularElement, Tuple};

/// The point `word · tail tail tail ...` of a full shift.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Point {
    word: Tuple,
    tail: usize,
}

impl Point {
    fn new(word: Tuple, tail: usize) -> Self {
        let mut p = Point { word, tail };
        while p.word.last() == Some(&p.tail) {
            p.word.pop();
        }
        p
    }

    fn at(&self, i: usize) -> usize {
        self.word.get(i).copied().unwrap_or(self.tail)
    }
}

fn act(g: &TabularElement, x: &Point) -> Point {
    let (s, t) = g
        .pairs()
        .iter()
        .find(|(s, _)| s.iter().enumerate().all(|(i, &e)| x.at(i) == e))
        .expect("sources partition X");
    let rest: Tuple = (s.len()..x.word.len().max(s.len())).map(|i| x.at(i)).collect();
    Point::new([t.as_slice(), &rest].concat(), x.tail)
}

/// Checks `composed(x) = a(b(x))` on every point `w · e^∞` of a full shift,
/// for all words `w` of length `depth` and all letters `e`.
pub fn agrees_pointwise(
    a: &TabularElement,
    b: &TabularElement,
    composed: &TabularElement,
    depth: usize,
) -> Result<bool, SftError> {
    let graph: &Graph = a.graph();
    let letters = graph.full_shift_arity().ok_or(SftError::NotFullShift)?;
    Ok(graph.words(depth).into_iter().all(|w| {
        (0..letters).all(|tail| {
            let x = Point::new(w.clone(), tail);
            act(composed, &x) == act(a, &act(b, &x))
        })
    }))
}
