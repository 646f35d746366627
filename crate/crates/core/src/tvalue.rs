//! Values of `T X` for the concrete monads.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational numbers, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// An element of `T E` in canonical form.
///
/// The payload kind is determined by the monad: `Set` for powerset and
/// downset, `Weights` for multisets (semiring elements by position, zeros
/// omitted), `Dist` for finitely supported distributions, `Nbhd` for the
/// neighbourhood monad (a set of subsets), `Word` for lists.
/// All collections are sorted by `E`'s order except words.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TVal<E> {
    Set(Vec<E>),
    Weights(Vec<(E, usize)>),
    Dist(Vec<(E, Rational)>),
    Nbhd(Vec<Vec<E>>),
    Word(Vec<E>),
}

/// `T X` over the positions of a carrier.
pub type TValue = TVal<usize>;

impl<E> TVal<E> {
    pub fn kind(&self) -> &'static str {
        match self {
            TVal::Set(_) => "set",
            TVal::Weights(_) => "weights",
            TVal::Dist(_) => "dist",
            TVal::Nbhd(_) => "nbhd",
            TVal::Word(_) => "word",
        }
    }

    /// Every leaf element occurring in the value.
    pub fn leaves(&self) -> Vec<&E> {
        match self {
            TVal::Set(v) | TVal::Word(v) => v.iter().collect(),
            TVal::Weights(v) => v.iter().map(|(e, _)| e).collect(),
            TVal::Dist(v) => v.iter().map(|(e, _)| e).collect(),
            TVal::Nbhd(v) => v.iter().flatten().collect(),
        }
    }

    /// Compact text form, using `leaf` for elements and `scalar` for
    /// semiring weights.
    pub fn render(&self, leaf: &dyn Fn(&E) -> String, scalar: &dyn Fn(usize) -> String) -> String {
        let set = |v: &[E]| format!("{{{}}}", v.iter().map(leaf).collect::<Vec<_>>().join(","));
        match self {
            TVal::Set(v) => set(v),
            TVal::Word(v) => format!("[{}]", v.iter().map(leaf).collect::<Vec<_>>().join(",")),
            TVal::Weights(v) => format!(
                "w{{{}}}",
                v.iter().map(|(e, s)| format!("{}:{}", leaf(e), scalar(*s))).collect::<Vec<_>>().join(",")
            ),
            TVal::Dist(v) => format!(
                "p{{{}}}",
                v.iter().map(|(e, q)| format!("{}:{}", leaf(e), rat_to_string(q))).collect::<Vec<_>>().join(",")
            ),
            TVal::Nbhd(v) => format!("n{{{}}}", v.iter().map(|s| set(s)).collect::<Vec<_>>().join(",")),
        }
    }
}
