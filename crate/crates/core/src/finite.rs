//! Finite sets, finite posets, functions between them, and finite semirings.
//!
//! Elements are addressed by their position in the carrier's declaration
//! order. Every set-like value downstream stores positions in ascending
//! order, so the declaration order is also the canonical order.

use crate::error::{Error, Result};
use crate::report::Report;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// A named finite set, optionally carrying a partial order.
#[derive(Clone)]
pub struct Carrier {
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// Reflexive-transitive order matrix; `None` for a discrete carrier.
    leq: Option<Vec<Vec<bool>>>,
}

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.leq_matrix() == other.leq_matrix()
    }
}

impl Eq for Carrier {}

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Carrier{:?}", self.names)?;
        if self.leq.is_some() {
            write!(f, " order {:?}", self.strict_pairs_named())?;
        }
        Ok(())
    }
}

/// Result of [`check_poset`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetCheck {
    pub violations: Vec<String>,
    /// The transitive closure of the input relation, as strict pairs.
    pub closure: Vec<(usize, usize)>,
}

impl PosetCheck {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that the transitive closure of `pairs` is irreflexive on `n`
/// elements, i.e. that the pairs generate a strict partial order.
pub fn check_poset(n: usize, pairs: &[(usize, usize)]) -> PosetCheck {
    let mut lt = vec![vec![false; n]; n];
    for &(a, b) in pairs {
        lt[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if lt[i][k] {
                for j in 0..n {
                    if lt[k][j] {
                        lt[i][j] = true;
                    }
                }
            }
        }
    }
    let mut violations = Vec::new();
    for (i, row) in lt.iter().enumerate() {
        if row[i] {
            violations.push(format!("cycle through element {i}"));
        }
    }
    let closure = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| lt[i][j])
        .collect();
    PosetCheck { violations, closure }
}

impl Carrier {
    /// A discrete carrier. Fails on empty or duplicate names.
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Invalid("empty element name".into()));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate element name `{n}`")));
            }
        }
        Ok(Carrier { names, index, leq: None })
    }

    /// A poset given by covering (or any generating) pairs `a < b`.
    /// The transitive closure is computed here.
    pub fn poset<S: Into<String>>(names: impl IntoIterator<Item = S>, pairs: &[(&str, &str)]) -> Result<Self> {
        let c = Self::new(names)?;
        let idx = pairs
            .iter()
            .map(|(a, b)| Ok((c.index_of(a)?, c.index_of(b)?)))
            .collect::<Result<Vec<_>>>()?;
        c.with_order(&idx)
    }

    /// Adds an order generated by strict pairs of positions.
    pub fn with_order(mut self, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = self.len();
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::Invalid(format!("order pair ({a},{b}) out of range")));
        }
        let check = check_poset(n, pairs);
        if !check.ok() {
            return Err(Error::Invalid(format!("not a partial order: {}", check.violations.join("; "))));
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in check.closure {
            leq[a][b] = true;
        }
        self.leq = Some(leq);
        Ok(self)
    }

    /// Builds a poset directly from a reflexive order predicate.
    pub fn with_leq(mut self, leq: impl Fn(usize, usize) -> bool) -> Self {
        let n = self.len();
        self.leq = Some((0..n).map(|i| (0..n).map(|j| i == j || leq(i, j)).collect()).collect());
        self
    }

    /// The same names without an order.
    pub fn discrete(&self) -> Self {
        Carrier {
            names: self.names.clone(),
            index: self.index.clone(),
            leq: None,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn is_poset(&self) -> bool {
        self.leq.is_some()
    }

    fn leq_matrix(&self) -> Option<&Vec<Vec<bool>>> {
        self.leq.as_ref()
    }

    /// The order; equality on a discrete carrier.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        match &self.leq {
            Some(m) => m[a][b],
            None => a == b,
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    /// All strict pairs `a < b` of the (closed) order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && self.leq(a, b))
            .collect()
    }

    /// Covering pairs of the order (its Hasse diagram).
    pub fn hasse_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        self.strict_pairs()
            .into_iter()
            .filter(|&(a, b)| !(0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b)))
            .collect()
    }

    pub fn strict_pairs_named(&self) -> Vec<(String, String)> {
        self.strict_pairs()
            .into_iter()
            .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
            .collect()
    }

    /// Positions below `x`, including `x`.
    pub fn down(&self, x: usize) -> Vec<usize> {
        self.elements().filter(|&y| self.leq(y, x)).collect()
    }

    /// Downward closure of a set of positions, sorted.
    pub fn downclose(&self, xs: &[usize]) -> Vec<usize> {
        self.elements().filter(|&y| xs.iter().any(|&x| self.leq(y, x))).collect()
    }

    pub fn is_downset(&self, xs: &[usize]) -> bool {
        self.downclose(xs) == xs
    }
}

pub type CarrierRef = Arc<Carrier>;

/// A total function between two carriers, stored as a table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteFunction {
    pub domain: CarrierRef,
    pub codomain: CarrierRef,
    pub table: Vec<usize>,
}

impl fmt::Debug for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .table
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}↦{}", self.domain.name(x), self.codomain.name(y)))
            .collect();
        write!(f, "[{}]", pairs.join(", "))
    }
}

impl FiniteFunction {
    pub fn new(domain: CarrierRef, codomain: CarrierRef, table: Vec<usize>) -> Result<Self> {
        if table.len() != domain.len() {
            return Err(Error::Invalid(format!(
                "function table has {} entries for a domain of {}",
                table.len(),
                domain.len()
            )));
        }
        if let Some(&y) = table.iter().find(|&&y| y >= codomain.len()) {
            return Err(Error::Invalid(format!("function value {y} outside codomain")));
        }
        Ok(FiniteFunction { domain, codomain, table })
    }

    /// Builds a function from `(source name, target name)` pairs.
    pub fn from_names(domain: CarrierRef, codomain: CarrierRef, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut table = vec![usize::MAX; domain.len()];
        for (a, b) in pairs {
            table[domain.index_of(a)?] = codomain.index_of(b)?;
        }
        if let Some(x) = table.iter().position(|&y| y == usize::MAX) {
            return Err(Error::Invalid(format!("function undefined at `{}`", domain.name(x))));
        }
        Ok(FiniteFunction { domain, codomain, table })
    }

    pub fn identity(c: CarrierRef) -> Self {
        let table = c.elements().collect();
        FiniteFunction {
            domain: c.clone(),
            codomain: c,
            table,
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_monotone(&self) -> bool {
        self.domain
            .strict_pairs()
            .iter()
            .all(|&(a, b)| self.codomain.leq(self.table[a], self.table[b]))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    /// Every function between two carriers, in lexicographic table order.
    pub fn all(domain: &CarrierRef, codomain: &CarrierRef) -> Vec<FiniteFunction> {
        all_tables(domain.len(), codomain.len())
            .into_iter()
            .map(|table| FiniteFunction {
                domain: domain.clone(),
                codomain: codomain.clone(),
                table,
            })
            .collect()
    }
}

/// Every table `0..n -> 0..m`, lexicographically.
pub fn all_tables(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m == 0 && n > 0 {
        return out;
    }
    let mut cur = vec![0usize; n];
    loop {
        out.push(cur.clone());
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < m {
                break;
            }
            cur[k] = 0;
        }
    }
}

/// `f ∘ g`: first `g`, then `f`.
pub fn compose(f: &FiniteFunction, g: &FiniteFunction) -> Result<FiniteFunction> {
    if *g.codomain != *f.domain {
        return Err(Error::CarrierMismatch(format!(
            "codomain {:?} of the inner function differs from domain {:?}",
            g.codomain.names(),
            f.domain.names()
        )));
    }
    Ok(FiniteFunction {
        domain: g.domain.clone(),
        codomain: f.codomain.clone(),
        table: g.table.iter().map(|&x| f.table[x]).collect(),
    })
}

/// A finite semiring given by operation tables over a carrier.
#[derive(Clone, PartialEq, Eq)]
pub struct Semiring {
    pub name: String,
    pub carrier: CarrierRef,
    pub plus: Vec<Vec<usize>>,
    pub times: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
}

impl fmt::Debug for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Semiring({})", self.name)
    }
}

impl Semiring {
    /// Builds and validates a semiring. All axioms are checked exhaustively.
    pub fn new(
        name: impl Into<String>,
        carrier: CarrierRef,
        plus: Vec<Vec<usize>>,
        times: Vec<Vec<usize>>,
        zero: usize,
        one: usize,
    ) -> Result<Self> {
        let s = Self::unchecked(name, carrier, plus, times, zero, one)?;
        let report = check_semiring(&s);
        match report.first_failure() {
            None => Ok(s),
            Some(c) => Err(Error::LawFailed {
                law: c.law.clone(),
                witness: c.witness.clone().unwrap_or_default(),
            }),
        }
    }

    /// Builds a semiring checking only table shapes.
    pub fn unchecked(
        name: impl Into<String>,
        carrier: CarrierRef,
        plus: Vec<Vec<usize>>,
        times: Vec<Vec<usize>>,
        zero: usize,
        one: usize,
    ) -> Result<Self> {
        let n = carrier.len();
        let shape_ok = |t: &Vec<Vec<usize>>| t.len() == n && t.iter().all(|r| r.len() == n && r.iter().all(|&v| v < n));
        if !shape_ok(&plus) || !shape_ok(&times) || zero >= n || one >= n {
            return Err(Error::Invalid("semiring tables are not total over the carrier".into()));
        }
        Ok(Semiring {
            name: name.into(),
            carrier,
            plus,
            times,
            zero,
            one,
        })
    }

    pub fn boolean() -> Self {
        let c = Arc::new(Carrier::new(["0", "1"]).unwrap());
        Self::new("bool", c, vec![vec![0, 1], vec![1, 1]], vec![vec![0, 0], vec![0, 1]], 0, 1).unwrap()
    }

    pub fn f2() -> Self {
        let c = Arc::new(Carrier::new(["0", "1"]).unwrap());
        Self::new("f2", c, vec![vec![0, 1], vec![1, 0]], vec![vec![0, 0], vec![0, 1]], 0, 1).unwrap()
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.plus[a][b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.times[a][b]
    }

    pub fn name_of(&self, a: usize) -> &str {
        self.carrier.name(a)
    }
}

/// Checks every semiring axiom over all triples; each violated axiom is
/// reported with its first witness.
pub fn check_semiring(s: &Semiring) -> Report {
    let n = s.len();
    let nm = |a: usize| s.name_of(a).to_string();
    let mut r = Report::new();
    let singles: Vec<usize> = (0..n).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let triples: Vec<(usize, usize, usize)> = pairs.iter().flat_map(|&(a, b)| (0..n).map(move |c| (a, b, c))).collect();
    let ex = "exhaustive";
    crate::report::check_all(&mut r, "plus unit", ex, &singles, |&&a| {
        (s.add(s.zero, a) != a || s.add(a, s.zero) != a).then(|| nm(a))
    });
    crate::report::check_all(&mut r, "plus commutative", ex, &pairs, |&&(a, b)| {
        (s.add(a, b) != s.add(b, a)).then(|| format!("({}, {})", nm(a), nm(b)))
    });
    crate::report::check_all(&mut r, "plus associative", ex, &triples, |&&(a, b, c)| {
        (s.add(s.add(a, b), c) != s.add(a, s.add(b, c))).then(|| format!("({}, {}, {})", nm(a), nm(b), nm(c)))
    });
    crate::report::check_all(&mut r, "times unit", ex, &singles, |&&a| {
        (s.mul(s.one, a) != a || s.mul(a, s.one) != a).then(|| nm(a))
    });
    crate::report::check_all(&mut r, "times associative", ex, &triples, |&&(a, b, c)| {
        (s.mul(s.mul(a, b), c) != s.mul(a, s.mul(b, c))).then(|| format!("({}, {}, {})", nm(a), nm(b), nm(c)))
    });
    crate::report::check_all(&mut r, "left distributive", ex, &triples, |&&(a, b, c)| {
        (s.mul(a, s.add(b, c)) != s.add(s.mul(a, b), s.mul(a, c))).then(|| format!("({}, {}, {})", nm(a), nm(b), nm(c)))
    });
    crate::report::check_all(&mut r, "right distributive", ex, &triples, |&&(a, b, c)| {
        (s.mul(s.add(a, b), c) != s.add(s.mul(a, c), s.mul(b, c))).then(|| format!("({}, {}, {})", nm(a), nm(b), nm(c)))
    });
    crate::report::check_all(&mut r, "zero absorbing", ex, &singles, |&&a| {
        (s.mul(s.zero, a) != s.zero || s.mul(a, s.zero) != s.zero).then(|| nm(a))
    });
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> CarrierRef {
        Arc::new(Carrier::new(["a", "b"]).unwrap())
    }

    #[test]
    fn compose_constant_then_point() {
        let ab = ab();
        let c = Arc::new(Carrier::new(["c"]).unwrap());
        let f = FiniteFunction::from_names(ab.clone(), c.clone(), &[("a", "c"), ("b", "c")]).unwrap();
        let g = FiniteFunction::from_names(c.clone(), ab, &[("c", "a")]).unwrap();
        let fg = compose(&f, &g).unwrap();
        assert_eq!(fg, FiniteFunction::identity(c));
    }

    #[test]
    fn swap_is_an_involution() {
        let ab = ab();
        let swap = FiniteFunction::new(ab.clone(), ab.clone(), vec![1, 0]).unwrap();
        assert_eq!(compose(&swap, &swap).unwrap(), FiniteFunction::identity(ab));
    }

    #[test]
    fn compose_rejects_mismatched_carriers() {
        let ab = ab();
        let c = Arc::new(Carrier::new(["c"]).unwrap());
        let f = FiniteFunction::identity(ab);
        let g = FiniteFunction::identity(c);
        assert!(matches!(compose(&f, &g), Err(Error::CarrierMismatch(_))));
    }

    #[test]
    fn poset_checks() {
        assert!(check_poset(2, &[]).ok());
        assert!(!check_poset(2, &[(0, 1), (1, 0)]).ok());
        let div = ["1", "2", "3", "4", "6", "12"];
        let c = Carrier::poset(
            div,
            &[("1", "2"), ("1", "3"), ("2", "4"), ("2", "6"), ("3", "6"), ("4", "12"), ("6", "12")],
        )
        .unwrap();
        // Oracle: the order is divisibility.
        let vals = [1u32, 2, 3, 4, 6, 12];
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(c.leq(i, j), vals[j] % vals[i] == 0);
            }
        }
        assert_eq!(c.hasse_pairs().len(), 7);
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(Carrier::new(["a", "a"]).is_err());
    }

    #[test]
    fn semiring_checks() {
        assert!(check_semiring(&Semiring::boolean()).ok());
        assert!(check_semiring(&Semiring::f2()).ok());
        let c = Arc::new(Carrier::new(["0", "1"]).unwrap());
        let broken = Semiring::unchecked("broken", c, vec![vec![0, 0], vec![1, 1]], vec![vec![0, 0], vec![0, 1]], 0, 1).unwrap();
        let r = check_semiring(&broken);
        let unit = r.get("plus unit").unwrap();
        assert_eq!(unit.witness.as_deref(), Some("1"));
    }

    #[test]
    fn all_tables_counts() {
        assert_eq!(all_tables(3, 2).len(), 8);
        assert_eq!(all_tables(0, 0).len(), 1);
        assert_eq!(all_tables(2, 0).len(), 0);
    }
}
