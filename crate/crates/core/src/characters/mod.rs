//! The character catalog (regular, identity, abelianization characters and
//! their convex combinations, plus the fixed-point measure) and a
//! finite-sample checker for the character axioms.

mod cyclotomic;
mod psd;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::exactnum::Rational;
use crate::plgroup::{PLMap, PlError};

pub use cyclotomic::Cyclotomic;
pub use psd::{decide_psd, min_eigenvalue, PsdStatus, PsdVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("cannot parse character {0:?}")]
    Parse(String),
    #[error("convex weight must lie strictly between 0 and 1, got {0}")]
    BadWeight(Rational),
    #[error("supports of g and h have intersecting closures")]
    SupportsNotDisjoint,
    #[error(transparent)]
    Pl(#[from] PlError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Character {
    /// `1` at the identity and `0` elsewhere.
    Regular,
    /// Constantly `1`.
    Identity,
    /// `exp(2πi (θ0 k0 + θ1 k1))` on endpoint slopes `(n^k0, n^k1)`.
    Abelianization(Rational, Rational),
    /// `α χ1 + (1 - α) χ2` with `0 < α < 1`.
    Convex(Rational, Box<Character>, Box<Character>),
    /// Normalized Lebesgue measure of the fixed-point set.
    FixMeasure,
}

impl Character {
    pub fn abelianization(theta0: Rational, theta1: Rational) -> Self {
        Character::Abelianization(theta0.fract_positive(), theta1.fract_positive())
    }

    pub fn convex(alpha: Rational, first: Character, second: Character) -> Result<Self, CharError> {
        if !(alpha.is_positive() && alpha < Rational::one()) {
            return Err(CharError::BadWeight(alpha));
        }
        Ok(Character::Convex(alpha, Box::new(first), Box::new(second)))
    }

    /// Whether the kind is one the classification allows; only `FixMeasure` is not.
    pub fn is_catalog(&self) -> bool {
        match self {
            Character::FixMeasure => false,
            Character::Convex(_, a, b) => a.is_catalog() && b.is_catalog(),
            _ => true,
        }
    }

    pub fn eval(&self, g: &PLMap) -> Result<Cyclotomic, CharError> {
        Ok(match self {
            Character::Regular => Cyclotomic::rational(if g.is_identity() { Rational::one() } else { Rational::zero() }),
            Character::Identity => Cyclotomic::one(),
            Character::Abelianization(t0, t1) => {
                let v = g.endpoint_slopes()?;
                Cyclotomic::root_of_unity(&(t0 * &Rational::from(v.k0) + t1 * &Rational::from(v.k1)))
            }
            Character::Convex(alpha, a, b) => {
                a.eval(g)?.scale(alpha).add(&b.eval(g)?.scale(&(Rational::one() - alpha)))
            }
            Character::FixMeasure => Cyclotomic::rational(g.fix_measure()),
        })
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Character::Regular => write!(f, "regular"),
            Character::Identity => write!(f, "identity"),
            Character::Abelianization(t0, t1) => write!(f, "abel:{t0},{t1}"),
            Character::Convex(alpha, a, b) => write!(f, "convex:{alpha}:{a}+{b}"),
            Character::FixMeasure => write!(f, "fixmeasure"),
        }
    }
}

impl FromStr for Character {
    type Err = CharError;

    /// Accepts `regular`, `identity`, `abel:θ0,θ1`, `fixmeasure` and
    /// `convex:α:χ1+χ2`, where the split is at the first `+`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CharError::Parse(s.to_string());
        let s = s.trim();
        match s {
            "regular" => return Ok(Character::Regular),
            "identity" => return Ok(Character::Identity),
            "fixmeasure" => return Ok(Character::FixMeasure),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("abel:") {
            let (t0, t1) = rest.split_once(',').ok_or_else(bad)?;
            return Ok(Character::abelianization(t0.parse().map_err(|_| bad())?, t1.parse().map_err(|_| bad())?));
        }
        if let Some(rest) = s.strip_prefix("convex:") {
            let (alpha, parts) = rest.split_once(':').ok_or_else(bad)?;
            let (a, b) = parts.split_once('+').ok_or_else(bad)?;
            return Character::convex(alpha.parse().map_err(|_| bad())?, a.parse()?, b.parse()?);
        }
        Err(bad())
    }
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn as_string<S: Serializer>(value: &Cyclotomic, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

fn matrix_as_strings<S: Serializer>(m: &[Vec<Cyclotomic>], serializer: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect();
    rows.serialize(serializer)
}

/// Exact Gram matrix `χ(g_i g_j^-1)` with its eigenvalue summary.
#[derive(Clone, Debug, Serialize)]
pub struct GramMatrix {
    #[serde(serialize_with = "matrix_as_strings")]
    pub entries: Vec<Vec<Cyclotomic>>,
    pub verdict: PsdVerdict,
}

pub fn gram(chi: &Character, elements: &[PLMap]) -> Result<GramMatrix, CharError> {
    let inverses: Vec<PLMap> = elements.iter().map(PLMap::inverse).collect();
    let mut entries = Vec::with_capacity(elements.len());
    for gi in elements {
        let row = inverses
            .iter()
            .map(|gj_inv| chi.eval(&gi.compose(gj_inv)?))
            .collect::<Result<Vec<_>, CharError>>()?;
        entries.push(row);
    }
    let verdict = decide_psd(&entries);
    Ok(GramMatrix { entries, verdict })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CentralityForm {
    /// `χ(g_i g_j)` against `χ(g_j g_i)`.
    Product,
    /// `χ(g_i g_j g_i^-1)` against `χ(g_j)`.
    Conjugation,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub i: usize,
    pub j: usize,
    pub form: CentralityForm,
    #[serde(serialize_with = "as_string")]
    pub lhs: Cyclotomic,
    #[serde(serialize_with = "as_string")]
    pub rhs: Cyclotomic,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub character: Character,
    pub sample_size: usize,
    pub centrality_pass: bool,
    pub centrality_checked: usize,
    pub counterexamples: Vec<Counterexample>,
    pub positive_definite_pass: bool,
    pub gram: GramMatrix,
    pub identity_pass: bool,
    #[serde(serialize_with = "as_string")]
    pub identity_value: Cyclotomic,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.centrality_pass && self.positive_definite_pass && self.identity_pass
    }
}

/// Checks the class-function, positive-definiteness and normalization axioms on a sample.
pub fn axiom_report(chi: &Character, elements: &[PLMap]) -> Result<AxiomReport, CharError> {
    let mut counterexamples = Vec::new();
    let mut checked = 0;
    for (i, gi) in elements.iter().enumerate() {
        for (j, gj) in elements.iter().enumerate() {
            if i == j {
                continue;
            }
            let forms = [
                (CentralityForm::Product, chi.eval(&gi.compose(gj)?)?, chi.eval(&gj.compose(gi)?)?),
                (CentralityForm::Conjugation, chi.eval(&gj.conjugate_by(gi)?)?, chi.eval(gj)?),
            ];
            for (form, lhs, rhs) in forms {
                checked += 1;
                if lhs != rhs {
                    counterexamples.push(Counterexample { i, j, form, lhs, rhs });
                }
            }
        }
    }
    let gram = gram(chi, elements)?;
    let identity_value = match elements.first() {
        Some(g) => chi.eval(&PLMap::identity(g.descriptor()))?,
        None => Cyclotomic::one(),
    };
    let centrality_pass = counterexamples.is_empty();
    let positive_definite_pass = gram.verdict.status == PsdStatus::Psd;
    let identity_pass = identity_value == Cyclotomic::one();
    let failed = !(centrality_pass && positive_definite_pass && identity_pass);
    let note = (failed && matches!(chi, Character::FixMeasure))
        .then(|| "consistent with absence of invariant measure".to_string());
    Ok(AxiomReport {
        character: chi.clone(),
        sample_size: elements.len(),
        centrality_pass,
        centrality_checked: checked,
        counterexamples,
        positive_definite_pass,
        gram,
        identity_pass,
        identity_value,
        note,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicativityCheck {
    pub pass: bool,
    #[serde(serialize_with = "as_string")]
    pub value_of_product: Cyclotomic,
    #[serde(serialize_with = "as_string")]
    pub product_of_values: Cyclotomic,
}

/// Compares `χ(gh)` with `χ(g) χ(h)` for `g`, `h` with disjoint support closures.
pub fn multiplicativity_check(chi: &Character, g: &PLMap, h: &PLMap) -> Result<MultiplicativityCheck, CharError> {
    if !g.support().closure().is_disjoint_from(&h.support().closure()) {
        return Err(CharError::SupportsNotDisjoint);
    }
    let value_of_product = chi.eval(&g.compose(h)?)?;
    let product_of_values = chi.eval(g)?.mul(&chi.eval(h)?);
    Ok(MultiplicativityCheck { pass: value_of_product == product_of_values, value_of_product, product_of_values })
}

#[cfg(test)]
mod tests;
