//! Minimal DFA, the lattice of unions of residuals, and the canonical
//! residual finite state automaton of the language of an NFA.

use crate::algebra::{Algebra, AlgebraRef, Structure};
use crate::bialgebra::{canonical_law, check_bialgebra, dot_escape, Bialgebra, DistributiveLaw, FCoalgebra, FTCoalgebra, MooreShape, OutVal, Outputs};
use crate::error::{guard, Error, Result};
use crate::finite::{Carrier, CarrierRef};
use crate::generator::{join_irreducible_generator, GeneratorTriple, GENERATOR_LAW};
use crate::monad::Monad;
use crate::report::{Opts, Report};
use crate::tvalue::TVal;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

/// A nondeterministic automaton with initial and accepting states. State
/// sets are kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    pub states: CarrierRef,
    pub alphabet: CarrierRef,
    pub initial: Vec<usize>,
    /// `trans[state][letter]`.
    pub trans: Vec<Vec<Vec<usize>>>,
    pub accepting: Vec<usize>,
}

fn normalise(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

impl Nfa {
    pub fn new(
        states: CarrierRef,
        alphabet: CarrierRef,
        initial: Vec<usize>,
        trans: Vec<Vec<Vec<usize>>>,
        accepting: Vec<usize>,
    ) -> Result<Self> {
        let n = states.len();
        let in_range = |v: &[usize]| v.iter().all(|&q| q < n);
        if trans.len() != n || trans.iter().any(|r| r.len() != alphabet.len() || r.iter().any(|s| !in_range(s))) {
            return Err(Error::CarrierMismatch("transition table is not total".into()));
        }
        if !in_range(&initial) || !in_range(&accepting) {
            return Err(Error::CarrierMismatch("initial or accepting state out of range".into()));
        }
        Ok(Nfa {
            states,
            alphabet,
            initial: normalise(initial),
            trans: trans.into_iter().map(|r| r.into_iter().map(normalise).collect()).collect(),
            accepting: normalise(accepting),
        })
    }

    pub fn step(&self, set: &[usize], letter: usize) -> Vec<usize> {
        normalise(set.iter().flat_map(|&q| self.trans[q][letter].iter().copied()).collect())
    }

    pub fn accepts_set(&self, set: &[usize]) -> bool {
        set.iter().any(|q| self.accepting.binary_search(q).is_ok())
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let end = word.iter().fold(self.initial.clone(), |s, &a| self.step(&s, a));
        self.accepts_set(&end)
    }

    /// The unpointed automaton as an `F P`-coalgebra with outputs in `{0,1}`.
    pub fn to_ftcoalgebra(&self) -> Result<FTCoalgebra> {
        FTCoalgebra::new(
            Monad::Powerset,
            self.states.clone(),
            self.alphabet.clone(),
            self.trans.iter().map(|r| r.iter().map(|s| TVal::Set(s.clone())).collect()).collect(),
            self.states.elements().map(|q| OutVal::Elem(self.accepts_set(&[q]) as usize)).collect(),
        )
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph nfa {\n  rankdir=LR;\n");
        for q in self.states.elements() {
            let shape = if self.accepting.contains(&q) { "doublecircle" } else { "circle" };
            s += &format!("  s{q} [shape={shape},label=\"{}\"];\n", dot_escape(self.states.name(q)));
        }
        for &q in &self.initial {
            s += &format!("  init{q} [shape=point];\n  init{q} -> s{q};\n");
        }
        for q in self.states.elements() {
            for a in self.alphabet.elements() {
                for r in &self.trans[q][a] {
                    s += &format!("  s{q} -> s{r} [label=\"{}\"];\n", dot_escape(self.alphabet.name(a)));
                }
            }
        }
        s + "}\n"
    }
}

/// A complete deterministic automaton with a start state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    pub states: CarrierRef,
    pub alphabet: CarrierRef,
    pub trans: Vec<Vec<usize>>,
    pub accepting: Vec<bool>,
    pub start: usize,
}

impl Dfa {
    pub fn run(&self, from: usize, word: &[usize]) -> usize {
        word.iter().fold(from, |q, &a| self.trans[q][a])
    }

    pub fn to_fcoalgebra(&self) -> FCoalgebra {
        FCoalgebra {
            carrier: self.states.clone(),
            alphabet: self.alphabet.clone(),
            trans: self.trans.clone(),
            out: self.accepting.iter().map(|&b| OutVal::Elem(b as usize)).collect(),
        }
    }

    pub fn to_nfa(&self) -> Nfa {
        Nfa {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            initial: vec![self.start],
            trans: self.trans.iter().map(|r| r.iter().map(|&q| vec![q]).collect()).collect(),
            accepting: self.states.elements().filter(|&q| self.accepting[q]).collect(),
        }
    }

    /// Whether the language of `q` is contained in the union of the
    /// languages of `set`, by search over pairs (state, subset).
    pub fn included(&self, q: usize, set: &[usize]) -> bool {
        let acc = |s: &[usize]| s.iter().any(|&p| self.accepting[p]);
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([(q, set.to_vec())]);
        while let Some((p, s)) = queue.pop_front() {
            if !seen.insert((p, s.clone())) {
                continue;
            }
            if self.accepting[p] && !acc(&s) {
                return false;
            }
            for a in self.alphabet.elements() {
                queue.push_back((self.trans[p][a], normalise(s.iter().map(|&r| self.trans[r][a]).collect())));
            }
        }
        true
    }
}

/// Subset construction from the initial states, Moore partition refinement,
/// then relabelling `q0, q1, …` in breadth-first order from the start state
/// (letters in alphabet order). Equal languages give equal results.
pub fn nfa_to_min_dfa(nfa: &Nfa) -> Dfa {
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut sets = vec![nfa.initial.clone()];
    index.insert(nfa.initial.clone(), 0);
    let mut trans: Vec<Vec<usize>> = Vec::new();
    let mut k = 0;
    while k < sets.len() {
        let mut row = Vec::with_capacity(nfa.alphabet.len());
        for a in nfa.alphabet.elements() {
            let next = nfa.step(&sets[k], a);
            let id = *index.entry(next.clone()).or_insert_with(|| {
                sets.push(next);
                sets.len() - 1
            });
            row.push(id);
        }
        trans.push(row);
        k += 1;
    }
    let accepting: Vec<bool> = sets.iter().map(|s| nfa.accepts_set(s)).collect();

    let mut block: Vec<usize> = accepting.iter().map(|&b| b as usize).collect();
    let mut count = block.iter().collect::<BTreeSet<_>>().len();
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let next: Vec<usize> = (0..sets.len())
            .map(|q| {
                let sig = (block[q], trans[q].iter().map(|&r| block[r]).collect());
                let n = ids.len();
                *ids.entry(sig).or_insert(n)
            })
            .collect();
        block = next;
        if ids.len() == count {
            break;
        }
        count = ids.len();
    }

    // Breadth-first relabelling of the quotient.
    let mut order: Vec<usize> = vec![block[0]];
    let mut label: HashMap<usize, usize> = HashMap::from([(block[0], 0)]);
    let rep: HashMap<usize, usize> = (0..sets.len()).rev().map(|q| (block[q], q)).collect();
    let mut k = 0;
    while k < order.len() {
        let q = rep[&order[k]];
        for &r in &trans[q] {
            if !label.contains_key(&block[r]) {
                label.insert(block[r], order.len());
                order.push(block[r]);
            }
        }
        k += 1;
    }
    let states = Arc::new(Carrier::new((0..order.len()).map(|i| format!("q{i}"))).unwrap());
    Dfa {
        states,
        alphabet: nfa.alphabet.clone(),
        trans: order.iter().map(|b| trans[rep[b]].iter().map(|&r| label[&block[r]]).collect()).collect(),
        accepting: order.iter().map(|b| accepting[rep[b]]).collect(),
        start: 0,
    }
}

/// All unions of residuals of a language, each stored as the set of
/// residuals (minimal DFA states) whose language it contains.
#[derive(Clone, Debug)]
pub struct ResidualLattice {
    pub dfa: Dfa,
    /// `members[e]`: the residuals below lattice element `e`, sorted.
    pub members: Vec<Vec<usize>>,
    /// The lattice element of each residual.
    pub residuals: Vec<usize>,
    /// Named by members, ordered by inclusion. Element 0 is the empty union.
    pub union_closure: CarrierRef,
}

impl ResidualLattice {
    pub fn build(dfa: Dfa, opts: &Opts) -> Result<Self> {
        let n = dfa.states.len();
        guard(format!("unions of {n} residuals"), 1u128.checked_shl(n as u32).unwrap_or(u128::MAX), opts.max_enum)?;
        let closure = |s: &[usize]| -> Vec<usize> { (0..n).filter(|&q| s.contains(&q) || dfa.included(q, s)).collect() };
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::from([closure(&[])]);
        queue.extend((0..n).map(|q| closure(&[q])));
        let singles: Vec<Vec<usize>> = (0..n).map(|q| closure(&[q])).collect();
        while let Some(s) = queue.pop_front() {
            if !found.insert(s.clone()) {
                continue;
            }
            for g in &singles {
                let u = normalise(s.iter().chain(g).copied().collect());
                if !found.contains(&u) {
                    queue.push_back(closure(&u));
                }
            }
        }
        let mut members: Vec<Vec<usize>> = found.into_iter().collect();
        members.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let name = |s: &Vec<usize>| format!("{{{}}}", s.iter().map(|&q| dfa.states.name(q)).collect::<Vec<_>>().join(","));
        let carrier = Carrier::new(members.iter().map(name))?;
        let subset = |a: &[usize], b: &[usize]| a.iter().all(|q| b.binary_search(q).is_ok());
        let carrier = carrier.with_leq(|a, b| subset(&members[a], &members[b]));
        let position = |s: &Vec<usize>| members.iter().position(|m| m == s).unwrap();
        let residuals = singles.iter().map(position).collect();
        Ok(ResidualLattice {
            members,
            residuals,
            union_closure: Arc::new(carrier),
            dfa,
        })
    }

    /// The element of the union of the given residuals.
    pub fn union_of(&self, residuals: &[usize]) -> usize {
        let s: Vec<usize> = (0..self.dfa.states.len())
            .filter(|&q| residuals.contains(&q) || self.dfa.included(q, residuals))
            .collect();
        self.members.iter().position(|m| *m == s).expect("lattice is union-closed")
    }

    /// Pointwise derivative and `[ε ∈ S]`.
    pub fn coalgebra(&self) -> FCoalgebra {
        let dfa = &self.dfa;
        let trans = self
            .members
            .iter()
            .map(|s| dfa.alphabet.elements().map(|a| self.union_of(&s.iter().map(|&q| dfa.trans[q][a]).collect::<Vec<_>>())).collect())
            .collect();
        let out = self.members.iter().map(|s| OutVal::Elem(s.iter().any(|&q| dfa.accepting[q]) as usize)).collect();
        FCoalgebra {
            carrier: self.union_closure.clone(),
            alphabet: dfa.alphabet.clone(),
            trans,
            out,
        }
    }
}

/// The minimal `P`-automaton: unions of residuals with union as algebra and
/// derivatives as coalgebra, certified as a bialgebra.
#[derive(Clone, Debug)]
pub struct MinimalPAutomaton {
    pub lattice: ResidualLattice,
    pub bialgebra: Bialgebra,
    /// The element for the language itself.
    pub start: usize,
}

/// The canonical powerset law for automata accepting by disjunction.
pub fn powerset_acceptor_law(alphabet: &CarrierRef, opts: &Opts) -> Result<Arc<DistributiveLaw>> {
    let shape = MooreShape {
        alphabet: alphabet.clone(),
        outputs: Outputs::standard(&Monad::Powerset)?,
    };
    Ok(Arc::new(canonical_law(&Monad::Powerset, shape, opts)?))
}

pub fn minimal_p_automaton(nfa: &Nfa, opts: &Opts) -> Result<MinimalPAutomaton> {
    let dfa = nfa_to_min_dfa(nfa);
    let start = dfa.start;
    let lattice = ResidualLattice::build(dfa, opts)?;
    let algebra = Arc::new(Algebra::new(Monad::Powerset, lattice.union_closure.clone(), Structure::Join)?);
    let coalgebra = lattice.coalgebra();
    let law = powerset_acceptor_law(&nfa.alphabet, opts)?;
    let certificate = match check_bialgebra(&algebra, &coalgebra, &law, false, opts) {
        // Large lattices: the pentagon is sampled instead.
        Err(Error::ExplosionGuard { .. }) if opts.mode == crate::report::Mode::Exhaustive => {
            check_bialgebra(&algebra, &coalgebra, &law, false, &opts.clone().with_mode(crate::report::Mode::sampled(2000, opts.seed())))?
        }
        other => other?,
    };
    if let Some(c) = certificate.first_failure() {
        return Err(Error::LawFailed {
            law: c.law.clone(),
            witness: c.witness.clone().unwrap_or_default(),
        });
    }
    let start = lattice.residuals[start];
    Ok(MinimalPAutomaton {
        bialgebra: Bialgebra {
            algebra,
            coalgebra,
            law,
            certificate,
            partial: false,
        },
        lattice,
        start,
    })
}

/// Outcome of a language comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    /// A shortest word accepted by exactly one side; among those of that
    /// length, the first in alphabet order.
    Separated(Vec<usize>),
}

/// Breadth-first search over pairs of reachable subsets.
pub fn check_equivalence(m1: &Nfa, m2: &Nfa) -> Result<Equivalence> {
    if m1.alphabet.names() != m2.alphabet.names() {
        return Err(Error::CarrierMismatch("automata over different alphabets".into()));
    }
    let start = (m1.initial.clone(), m2.initial.clone());
    let mut parent: HashMap<(Vec<usize>, Vec<usize>), Option<((Vec<usize>, Vec<usize>), usize)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(pair) = queue.pop_front() {
        if m1.accepts_set(&pair.0) != m2.accepts_set(&pair.1) {
            let mut word = Vec::new();
            let mut cur = &pair;
            while let Some((prev, a)) = &parent[cur] {
                word.push(*a);
                cur = prev;
            }
            word.reverse();
            return Ok(Equivalence::Separated(word));
        }
        for a in m1.alphabet.elements() {
            let next = (m1.step(&pair.0, a), m2.step(&pair.1, a));
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((pair.clone(), a)));
                queue.push_back(next);
            }
        }
    }
    Ok(Equivalence::Equal)
}

pub const LANGUAGE_EQUAL: &str = "rfsa: same language as the input";
pub const STATES_ARE_RESIDUALS: &str = "rfsa: every state accepts a residual";
pub const NOT_LARGER: &str = "rfsa: no more states than the minimal DFA";

/// The canonical RFSA together with the data it was read off from.
#[derive(Clone, Debug)]
pub struct CanonicalRfsa {
    pub nfa: Nfa,
    pub minimal: MinimalPAutomaton,
    /// Join-irreducibles of the union lattice as a generator of its algebra.
    pub generator: GeneratorTriple,
    /// The generator law and the checks on the result.
    pub report: Report,
    /// Whether the join-irreducibles are moreover a basis; informational.
    pub basis_report: Report,
}

/// For each lattice element, a shortest word `u` with `u⁻¹L` equal to it, if any.
pub fn residual_words(mp: &MinimalPAutomaton) -> BTreeMap<usize, Vec<usize>> {
    let dfa = &mp.lattice.dfa;
    let mut words: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut seen = vec![false; dfa.states.len()];
    let mut queue = VecDeque::from([(dfa.start, Vec::new())]);
    seen[dfa.start] = true;
    while let Some((q, w)) = queue.pop_front() {
        words.entry(mp.lattice.residuals[q]).or_insert_with(|| w.clone());
        for a in dfa.alphabet.elements() {
            let r = dfa.trans[q][a];
            if !seen[r] {
                seen[r] = true;
                let mut w = w.clone();
                w.push(a);
                queue.push_back((r, w));
            }
        }
    }
    words
}

/// States are the join-irreducible unions of residuals; `R` goes to the
/// join-irreducibles below `a⁻¹R` on `a`; `R` accepts when `ε ∈ R`; the
/// initial states are the join-irreducibles below `L`. The result is checked
/// for language equality with the input.
pub fn canonical_rfsa(nfa: &Nfa, opts: &Opts) -> Result<CanonicalRfsa> {
    let mp = minimal_p_automaton(nfa, opts)?;
    let alg: &AlgebraRef = &mp.bialgebra.algebra;
    let (g, full) = join_irreducible_generator(alg, opts)?;
    let (mut report, mut basis_report) = (Report::new(), Report::new());
    for c in full.certificates {
        if c.law == GENERATOR_LAW { &mut report } else { &mut basis_report }.certificates.push(c);
    }
    let k = &mp.bialgebra.coalgebra;
    let set = |t: &TVal<usize>| match t {
        TVal::Set(v) => v.clone(),
        _ => unreachable!("powerset generator"),
    };
    let trans = g
        .i
        .iter()
        .map(|&x| nfa.alphabet.elements().map(|a| set(&g.d[k.trans[x][a]])).collect())
        .collect();
    let accepting = g.y.elements().filter(|&j| k.out[g.i[j]] == OutVal::Elem(1)).collect();
    let states = Arc::new(Carrier::new(g.y.names().to_vec())?);
    let out = Nfa::new(states, nfa.alphabet.clone(), set(&g.d[mp.start]), trans, accepting)?;

    let witness = match check_equivalence(nfa, &out)? {
        Equivalence::Equal => None,
        Equivalence::Separated(w) => Some(render_word(&nfa.alphabet, &w)),
    };
    report.push(LANGUAGE_EQUAL, "exhaustive", 1, witness);
    let words = residual_words(&mp);
    let bad = g.i.iter().position(|x| !words.contains_key(x)).map(|j| g.y.name(j).to_string());
    report.push(STATES_ARE_RESIDUALS, "exhaustive", g.y.len() as u64, bad);
    let residuals = mp.lattice.dfa.states.len();
    let bad = (out.states.len() > residuals).then(|| format!("{} > {residuals}", out.states.len()));
    report.push(NOT_LARGER, "exhaustive", 1, bad);
    Ok(CanonicalRfsa {
        nfa: out,
        minimal: mp,
        generator: g,
        report,
        basis_report,
    })
}

pub fn render_word(alphabet: &Carrier, w: &[usize]) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        w.iter().map(|&a| alphabet.name(a)).collect::<Vec<_>>().join("")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{check_generator, exhaustive};
    use crate::generator::Status;

    fn ab() -> CarrierRef {
        Arc::new(Carrier::new(["a", "b"]).unwrap())
    }

    fn nfa(n: usize, edges: &[(usize, usize, usize)], initial: &[usize], accepting: &[usize]) -> Nfa {
        let states = Arc::new(Carrier::new((0..n).map(|i| format!("p{i}"))).unwrap());
        let mut trans = vec![vec![vec![]; 2]; n];
        for &(p, a, q) in edges {
            trans[p][a].push(q);
        }
        Nfa::new(states, ab(), initial.to_vec(), trans, accepting.to_vec()).unwrap()
    }

    fn ends_in(letter: usize) -> Nfa {
        nfa(2, &[(0, 0, 0), (0, 1, 0), (0, letter, 1)], &[0], &[1])
    }

    fn words(n: usize) -> Vec<Vec<usize>> {
        let mut all = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..n {
            layer = layer
                .iter()
                .flat_map(|w: &Vec<usize>| (0..2).map(move |a| [w.clone(), vec![a]].concat()))
                .collect();
            all.extend(layer.clone());
        }
        all
    }

    /// Accepted words up to length `n`, from an explicit state set.
    fn language_from(m: &Nfa, from: &[usize], n: usize) -> BTreeSet<Vec<usize>> {
        words(n)
            .into_iter()
            .filter(|w| m.accepts_set(&w.iter().fold(from.to_vec(), |s, &a| m.step(&s, a))))
            .collect()
    }

    fn corpus() -> Vec<Nfa> {
        vec![
            ends_in(0),
            ends_in(1),
            nfa(1, &[], &[0], &[]),
            nfa(1, &[(0, 0, 0), (0, 1, 0)], &[0], &[0]),
            // ab
            nfa(3, &[(0, 0, 1), (1, 1, 2)], &[0], &[2]),
            // second letter from the end is a
            nfa(3, &[(0, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 2), (1, 1, 2)], &[0], &[2]),
            // third letter from the end is a
            nfa(4, &[(0, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 2), (1, 1, 2), (2, 0, 3), (2, 1, 3)], &[0], &[3]),
            // contains aa
            nfa(3, &[(0, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 2), (2, 0, 2), (2, 1, 2)], &[0], &[2]),
            // even number of a
            nfa(2, &[(0, 0, 1), (1, 0, 0), (0, 1, 0), (1, 1, 1)], &[0], &[0]),
            // two initial states: a* + b*
            nfa(2, &[(0, 0, 0), (1, 1, 1)], &[0, 1], &[0, 1]),
            // (ab)* with a redundant copy
            nfa(4, &[(0, 0, 1), (1, 1, 0), (2, 0, 3), (3, 1, 2)], &[0, 2], &[0, 2]),
            // a(a+b)*b + b
            nfa(4, &[(0, 0, 1), (1, 0, 1), (1, 1, 1), (1, 1, 2), (0, 1, 3)], &[0], &[2, 3]),
            // length divisible by 3, nondeterministic shortcuts
            nfa(3, &[(0, 0, 1), (0, 1, 1), (1, 0, 2), (1, 1, 2), (2, 0, 0), (2, 1, 0), (0, 0, 2)], &[0], &[0]),
        ]
    }

    #[test]
    fn minimal_dfa_examples() {
        let d = nfa_to_min_dfa(&ends_in(0));
        assert_eq!(d.states.len(), 2);
        let d = nfa_to_min_dfa(&nfa(1, &[], &[0], &[]));
        assert_eq!((d.states.len(), d.accepting.clone()), (1, vec![false]));
        let d = nfa_to_min_dfa(&nfa(1, &[(0, 0, 0), (0, 1, 0)], &[0], &[0]));
        assert_eq!((d.states.len(), d.accepting.clone()), (1, vec![true]));
    }

    #[test]
    fn minimal_dfa_is_correct_and_minimal() {
        for m in corpus() {
            let d = nfa_to_min_dfa(&m);
            assert_eq!(language_from(&d.to_nfa(), &[d.start], 8), language_from(&m, &m.initial, 8));
            // Distinct states are separated by some short word.
            for p in d.states.elements() {
                for q in 0..p {
                    assert!(words(d.states.len()).iter().any(|w| d.accepting[d.run(p, w)] != d.accepting[d.run(q, w)]));
                }
            }
        }
    }

    #[test]
    fn residual_lattice_examples() {
        let opts = exhaustive();
        let mp = minimal_p_automaton(&ends_in(0), &opts).unwrap();
        let c = &mp.lattice.union_closure;
        assert_eq!(c.len(), 3);
        assert!(c.elements().all(|x| c.elements().all(|y| c.leq(x, y) || c.leq(y, x))));
        let mp = minimal_p_automaton(&nfa(1, &[], &[0], &[]), &opts).unwrap();
        assert_eq!(mp.lattice.union_closure.len(), 1);
    }

    #[test]
    fn union_closure_matches_word_set_oracle() {
        let opts = exhaustive();
        for m in corpus() {
            let mp = minimal_p_automaton(&m, &opts).unwrap();
            let dfa = &mp.lattice.dfa;
            let res: Vec<BTreeSet<Vec<usize>>> = dfa.states.elements().map(|q| language_from(&dfa.to_nfa(), &[q], 9)).collect();
            let mut unions = BTreeSet::new();
            for mask in 0u32..(1 << res.len()) {
                let u: BTreeSet<Vec<usize>> = (0..res.len()).filter(|k| mask >> k & 1 == 1).flat_map(|k| res[k].clone()).collect();
                unions.insert(u);
            }
            assert_eq!(mp.lattice.union_closure.len(), unions.len());
            assert!(mp.bialgebra.certificate.ok());
        }
    }

    #[test]
    fn canonical_rfsa_of_ends_in_a() {
        let r = canonical_rfsa(&ends_in(0), &exhaustive()).unwrap();
        assert_eq!(r.nfa.states.len(), 2);
        assert!(r.report.ok(), "{}", r.report);
    }

    #[test]
    fn canonical_rfsa_of_a_single_word() {
        let m = nfa(3, &[(0, 0, 1), (1, 1, 2)], &[0], &[2]);
        let r = canonical_rfsa(&m, &exhaustive()).unwrap();
        assert!(r.report.ok(), "{}", r.report);
        // Residuals ab, b, ε are join-irreducible; ∅ is the bottom.
        assert_eq!(r.nfa.states.len(), 3);
    }

    fn isomorphic(m1: &Nfa, m2: &Nfa) -> bool {
        let n = m1.states.len();
        if n != m2.states.len() {
            return false;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let map = |p: &[usize], s: &[usize]| normalise(s.iter().map(|&q| p[q]).collect());
        loop {
            if map(&perm, &m1.initial) == m2.initial
                && map(&perm, &m1.accepting) == m2.accepting
                && (0..n).all(|q| (0..2).all(|a| map(&perm, &m1.trans[q][a]) == m2.trans[perm[q]][a]))
            {
                return true;
            }
            // next permutation
            let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { return false };
            let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
    }

    #[test]
    fn canonical_rfsa_is_a_fixpoint() {
        let opts = exhaustive();
        for m in corpus() {
            let once = canonical_rfsa(&m, &opts).unwrap().nfa;
            let twice = canonical_rfsa(&once, &opts).unwrap().nfa;
            assert!(isomorphic(&once, &twice));
        }
    }

    #[test]
    fn corpus_properties() {
        let opts = exhaustive();
        for m in corpus() {
            let r = canonical_rfsa(&m, &opts).unwrap();
            assert!(r.report.ok(), "{}", r.report);
            assert_ne!(r.generator.status, Status::Unchecked);
            assert!(check_generator(&r.generator).unwrap().ok());
            assert_eq!(language_from(&r.nfa, &r.nfa.initial, 8), language_from(&m, &m.initial, 8));
            assert!(r.nfa.states.len() <= r.minimal.lattice.dfa.states.len());
            assert_eq!(nfa_to_min_dfa(&r.nfa), nfa_to_min_dfa(&m));
            // Each state's language is u⁻¹L for a word u.
            for q in r.nfa.states.elements() {
                let own = language_from(&r.nfa, &[q], 6);
                assert!(words(6).iter().any(|u| {
                    let derived: BTreeSet<Vec<usize>> = words(6 - u.len())
                        .into_iter()
                        .filter(|v| m.accepts(&[u.clone(), v.clone()].concat()))
                        .collect();
                    own.iter().filter(|w| w.len() <= 6 - u.len()).cloned().collect::<BTreeSet<_>>() == derived
                }));
            }
        }
    }

    #[test]
    fn equivalence_verdicts() {
        let m = ends_in(0);
        assert_eq!(check_equivalence(&m, &m).unwrap(), Equivalence::Equal);
        assert_eq!(check_equivalence(&ends_in(0), &ends_in(1)).unwrap(), Equivalence::Separated(vec![0]));
        let empty = nfa(1, &[], &[0], &[]);
        let ab = nfa(3, &[(0, 0, 1), (1, 1, 2)], &[0], &[2]);
        assert_eq!(check_equivalence(&empty, &ab).unwrap(), Equivalence::Separated(vec![0, 1]));
    }

    #[test]
    fn nfa_dot() {
        let dot = ends_in(0).to_dot();
        assert!(dot.contains("s1 [shape=doublecircle"));
        assert!(dot.contains("s0 -> s1 [label=\"a\"]"));
    }
}
