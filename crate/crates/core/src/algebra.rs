//! Eilenberg-Moore algebras over the shipped monads, their homomorphisms,
//! free algebras and the lifting `f♯ = h ∘ Tf`.

use crate::error::{Error, Result};
use crate::finite::{Carrier, CarrierRef, FiniteFunction};
use crate::laws::{mode_label, sample_t2, t_domain};
use crate::monad::{all_subsets, Monad, Space, TSpace};
use crate::report::{Mode, Opts, Report};
use crate::tvalue::{rat, Rational, TVal, TValue};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// How `h : T X → X` is computed.
#[derive(Clone, PartialEq, Eq)]
pub enum Structure {
    /// Explicit table over the enumerated `T X`.
    Table(BTreeMap<TValue, usize>),
    /// Least upper bound in the carrier order (powerset and downset algebras).
    Join,
    /// Least upper bound of the support (a semilattice as a convex algebra).
    SupportJoin,
    /// `Σ sᵢ·xᵢ` for a semimodule given by addition, zero and scalar action
    /// `act[s][x]`.
    Module { add: Vec<Vec<usize>>, zero: usize, act: Vec<Vec<usize>> },
    /// Iterated product of a monoid.
    Monoid { mul: Vec<Vec<usize>>, unit: usize },
    /// Neighbourhood algebra on a finite Boolean lattice: `h(Φ)` is the join
    /// over `A ∈ Φ` of the minterm `⋀A ∧ ⋀{¬y | y ∉ A}`.
    Boolean,
    /// The free algebra `(T Y, μ_Y)`; carrier positions index `values`.
    Free { base: CarrierRef, values: Arc<Vec<TValue>> },
}

impl Structure {
    pub fn rule_name(&self) -> &'static str {
        match self {
            Structure::Table(_) => "table",
            Structure::Join => "join",
            Structure::SupportJoin => "support-join",
            Structure::Module { .. } => "module",
            Structure::Monoid { .. } => "monoid",
            Structure::Boolean => "boolean",
            Structure::Free { .. } => "free",
        }
    }
}

/// A carrier together with a structure map for a monad.
#[derive(Clone)]
pub struct Algebra {
    pub monad: Monad,
    pub carrier: CarrierRef,
    pub structure: Structure,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({}, {}, {:?})", self.monad, self.structure.rule_name(), self.carrier.names())
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.monad == other.monad && self.carrier == other.carrier && self.structure == other.structure
    }
}

pub type AlgebraRef = Arc<Algebra>;

/// Least upper bound of `xs` in the carrier order, if it exists.
pub fn lub(c: &Carrier, xs: &[usize]) -> Option<usize> {
    let ubs: Vec<usize> = c.elements().filter(|&u| xs.iter().all(|&x| c.leq(x, u))).collect();
    ubs.iter().copied().find(|&u| ubs.iter().all(|&v| c.leq(u, v)))
}

/// Greatest lower bound of `xs` in the carrier order, if it exists.
pub fn glb(c: &Carrier, xs: &[usize]) -> Option<usize> {
    let lbs: Vec<usize> = c.elements().filter(|&l| xs.iter().all(|&x| c.leq(l, x))).collect();
    lbs.iter().copied().find(|&l| lbs.iter().all(|&v| c.leq(v, l)))
}

fn complement(c: &Carrier, x: usize) -> Option<usize> {
    let bot = glb(c, &c.elements().collect::<Vec<_>>())?;
    let top = lub(c, &c.elements().collect::<Vec<_>>())?;
    c.elements().find(|&y| lub(c, &[x, y]) == Some(top) && glb(c, &[x, y]) == Some(bot))
}

impl Algebra {
    /// Builds an algebra and checks the unit law `h ∘ η = id` on every element.
    pub fn new(monad: Monad, carrier: CarrierRef, structure: Structure) -> Result<Self> {
        let a = Algebra {
            monad,
            carrier,
            structure,
        };
        for x in a.carrier.elements() {
            let hx = a.apply(&a.monad.unit(&*a.carrier, &x)?)?;
            if hx != x {
                return Err(Error::LawFailed {
                    law: "unit: h∘η = id".into(),
                    witness: a.carrier.name(x).to_string(),
                });
            }
        }
        Ok(a)
    }

    /// Builds an algebra without checking any law.
    pub fn unchecked(monad: Monad, carrier: CarrierRef, structure: Structure) -> Self {
        Algebra {
            monad,
            carrier,
            structure,
        }
    }

    /// Powerset algebra of a finite lattice, `h(A) = ⋁A`.
    pub fn join_lattice(carrier: CarrierRef) -> Result<Self> {
        Self::new(Monad::Powerset, carrier, Structure::Join)
    }

    /// The disjunctive powerset algebra on `2 = {0 < 1}`.
    pub fn disjunctive() -> Self {
        let two = Carrier::poset(["0", "1"], &[("0", "1")]).unwrap();
        Self::unchecked(Monad::Powerset, Arc::new(two), Structure::Join)
    }

    /// The neighbourhood algebra on `2`, `h(Φ) = [{1} ∈ Φ]`.
    pub fn boolean_two() -> Self {
        let two = Carrier::poset(["0", "1"], &[("0", "1")]).unwrap();
        Self::unchecked(Monad::Neighbourhood, Arc::new(two), Structure::Boolean)
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn render(&self, t: &TValue) -> String {
        self.monad.render(&*self.carrier, t)
    }

    /// For free algebras: the `T Y` value at a carrier position.
    pub fn free_value(&self, x: usize) -> Option<&TValue> {
        match &self.structure {
            Structure::Free { values, .. } => values.get(x),
            _ => None,
        }
    }

    /// For free algebras: the carrier position of a `T Y` value.
    pub fn free_position(&self, t: &TValue) -> Result<usize> {
        match &self.structure {
            Structure::Free { values, base } => values
                .binary_search(t)
                .map_err(|_| Error::Invalid(format!("{} is not in the free algebra", self.monad.render(&**base, t)))),
            _ => Err(Error::NotApplicable("not a free algebra".into())),
        }
    }

    pub fn free_base(&self) -> Option<&CarrierRef> {
        match &self.structure {
            Structure::Free { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Evaluates the structure map.
    pub fn apply(&self, t: &TValue) -> Result<usize> {
        let c = &*self.carrier;
        let no_lub = || Error::Invalid(format!("{} has no least upper bound", self.render(t)));
        match (&self.structure, t) {
            (Structure::Table(tab), _) => tab
                .get(t)
                .copied()
                .ok_or_else(|| Error::Invalid(format!("structure table undefined at {}", self.render(t)))),
            (Structure::Join, TVal::Set(v)) => lub(c, v).ok_or_else(no_lub),
            (Structure::SupportJoin, TVal::Dist(v)) => {
                let supp: Vec<usize> = v.iter().map(|(x, _)| *x).collect();
                lub(c, &supp).ok_or_else(no_lub)
            }
            (Structure::Module { add, zero, act }, TVal::Weights(v)) => {
                Ok(v.iter().fold(*zero, |acc, &(x, s)| add[acc][act[s][x]]))
            }
            (Structure::Monoid { mul, unit }, TVal::Word(w)) => Ok(w.iter().fold(*unit, |acc, &x| mul[acc][x])),
            (Structure::Boolean, TVal::Nbhd(fam)) => {
                let all: Vec<usize> = c.elements().collect();
                let mut terms = Vec::with_capacity(fam.len());
                for a in fam {
                    let mut lits = Vec::with_capacity(all.len());
                    for &y in &all {
                        if a.binary_search(&y).is_ok() {
                            lits.push(y);
                        } else {
                            lits.push(complement(c, y).ok_or_else(|| Error::Invalid("carrier is not Boolean".into()))?);
                        }
                    }
                    terms.push(glb(c, &lits).ok_or_else(|| Error::Invalid("carrier is not a lattice".into()))?);
                }
                lub(c, &terms).ok_or_else(no_lub)
            }
            (Structure::Free { base, values }, _) => {
                let decoded = self.decode_free(t, values)?;
                let m = self.monad.mult(&**base, &decoded)?;
                values
                    .binary_search(&m)
                    .map_err(|_| Error::Invalid(format!("μ result {} outside the carrier", self.monad.render(&**base, &m))))
            }
            _ => Err(Error::MalformedNesting(format!(
                "{} structure cannot evaluate a {} value",
                self.structure.rule_name(),
                t.kind()
            ))),
        }
    }

    fn decode_free(&self, t: &TValue, values: &[TValue]) -> Result<TVal<TValue>> {
        let get = |i: &usize| values.get(*i).cloned().ok_or_else(|| Error::Invalid("position out of range".into()));
        Ok(match t {
            TVal::Set(v) => TVal::Set(v.iter().map(get).collect::<Result<_>>()?),
            TVal::Word(v) => TVal::Word(v.iter().map(get).collect::<Result<_>>()?),
            TVal::Weights(v) => TVal::Weights(v.iter().map(|(i, s)| Ok((get(i)?, *s))).collect::<Result<_>>()?),
            TVal::Dist(v) => TVal::Dist(v.iter().map(|(i, p)| Ok((get(i)?, p.clone()))).collect::<Result<_>>()?),
            TVal::Nbhd(v) => TVal::Nbhd(
                v.iter()
                    .map(|s| s.iter().map(get).collect::<Result<Vec<_>>>())
                    .collect::<Result<_>>()?,
            ),
        })
    }

    /// Materialises the structure map as a table over the enumerated `T X`.
    pub fn tabulate(&self, opts: &Opts) -> Result<Structure> {
        let tx = self.monad.enumerate(&*self.carrier, opts)?;
        let mut tab = BTreeMap::new();
        for t in tx {
            let v = self.apply(&t)?;
            tab.insert(t, v);
        }
        Ok(Structure::Table(tab))
    }
}

/// The free algebra `(T Y, μ_Y)`. Its carrier names are the rendered values;
/// for the downset monad the carrier is ordered by inclusion.
pub fn free_algebra(monad: &Monad, base: &CarrierRef, opts: &Opts) -> Result<Algebra> {
    if !monad.is_finitary() {
        return Err(Error::NotApplicable(format!("T Y is infinite for the {monad} monad")));
    }
    algebra_on_values(monad, base, monad.enumerate(&**base, opts)?)
}

/// `μ_Y` on a sorted set of `T Y` values. When the set is not closed under
/// `μ` the structure map is partial and errors outside it.
pub fn algebra_on_values(monad: &Monad, base: &CarrierRef, values: Vec<TValue>) -> Result<Algebra> {
    let names: Vec<String> = values.iter().map(|t| monad.render(&**base, t)).collect();
    let mut carrier = Carrier::new(names)?;
    if matches!(monad, Monad::Downset) {
        carrier = carrier.with_leq(|i, j| match (&values[i], &values[j]) {
            (TVal::Set(a), TVal::Set(b)) => crate::monad::is_subset(a, b),
            _ => false,
        });
    }
    Ok(Algebra::unchecked(
        monad.clone(),
        Arc::new(carrier),
        Structure::Free {
            base: base.clone(),
            values: Arc::new(values),
        },
    ))
}

/// Checks `h∘η = id` on the carrier and `h∘μ = h∘Th` on `T²X`.
pub fn check_algebra(alg: &Algebra, opts: &Opts) -> Result<Report> {
    let m = &alg.monad;
    let x = &*alg.carrier;
    let mut report = Report::new();
    let mut unit_fail = None;
    for e in x.elements() {
        if alg.apply(&m.unit(x, &e)?)? != e {
            unit_fail = Some(x.name(e).to_string());
            break;
        }
    }
    report.push("unit: h∘η = id", "exhaustive", x.len() as u64, unit_fail);

    let t1 = TSpace::new(m, x, opts);
    let tt: Vec<TVal<TValue>> = match opts.mode {
        Mode::Exhaustive => TSpace::new(m, &t1, opts).elements()?.to_vec(),
        Mode::Sampled { samples, .. } => sample_t2(m, x, &t1, opts, samples, 7)?,
    };
    let mut witness = None;
    for t in &tt {
        let lhs = alg.apply(&m.mult(x, t)?)?;
        let th = m.map(t, &|inner: &TValue| alg.apply(inner), &t1, x)?;
        if lhs != alg.apply(&th)? {
            witness = Some(m.render(&t1, t));
            break;
        }
    }
    report.push("multiplication: h∘μ = h∘Th", mode_label(m, opts), tt.len() as u64, witness);
    Ok(report)
}

/// A structure-preserving map between two algebras for the same monad.
#[derive(Clone, Debug)]
pub struct AlgebraHom {
    pub source: AlgebraRef,
    pub target: AlgebraRef,
    pub map: Vec<usize>,
    pub certificate: Report,
}

impl AlgebraHom {
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn as_function(&self) -> FiniteFunction {
        FiniteFunction {
            domain: self.source.carrier.clone(),
            codomain: self.target.carrier.clone(),
            table: self.map.clone(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        self.source.len() == self.target.len() && self.as_function().is_injective()
    }
}

/// Checks `f ∘ h_X = h_Y ∘ T f` on `T X` (all of it, or samples).
pub fn check_hom(source: &Algebra, target: &Algebra, map: &[usize], opts: &Opts) -> Result<Report> {
    if source.monad != target.monad {
        return Err(Error::CarrierMismatch("homomorphism between algebras for different monads".into()));
    }
    if map.len() != source.len() || map.iter().any(|&y| y >= target.len()) {
        return Err(Error::CarrierMismatch("homomorphism table does not fit the carriers".into()));
    }
    let m = &source.monad;
    let tx = t_domain(m, &*source.carrier, opts, 11)?;
    let mut witness = None;
    for t in &tx {
        let lhs = map[source.apply(t)?];
        let tf = m.map(t, &|x: &usize| Ok(map[*x]), &*source.carrier, &*target.carrier)?;
        if lhs != target.apply(&tf)? {
            witness = Some(source.render(t));
            break;
        }
    }
    let mut r = Report::new();
    r.push("homomorphism: f∘h = h∘Tf", mode_label(m, opts), tx.len() as u64, witness);
    Ok(r)
}

/// Builds a certified homomorphism, failing with the witness otherwise.
pub fn certify_hom(source: AlgebraRef, target: AlgebraRef, map: Vec<usize>, opts: &Opts) -> Result<AlgebraHom> {
    let certificate = check_hom(&source, &target, &map, opts)?;
    if let Some(c) = certificate.first_failure() {
        return Err(Error::LawFailed {
            law: c.law.clone(),
            witness: c.witness.clone().unwrap_or_default(),
        });
    }
    Ok(AlgebraHom {
        source,
        target,
        map,
        certificate,
    })
}

/// `f♯ = h ∘ T f : (T Y, μ_Y) → (X, h)` for `f : Y → X`.
pub fn lift_sharp(f: &FiniteFunction, target: &AlgebraRef, opts: &Opts) -> Result<AlgebraHom> {
    if *f.codomain != *target.carrier {
        return Err(Error::CarrierMismatch("f does not land in the target algebra".into()));
    }
    let free = Arc::new(free_algebra(&target.monad, &f.domain, opts)?);
    let map = sharp_table(&free, f, target)?;
    certify_hom(free, target.clone(), map, opts)
}

/// The table of `h ∘ T f` over the carrier of a free algebra on `dom(f)`.
pub(crate) fn sharp_table(free: &Algebra, f: &FiniteFunction, target: &Algebra) -> Result<Vec<usize>> {
    let Structure::Free { values, base } = &free.structure else {
        return Err(Error::NotApplicable("source is not free".into()));
    };
    values
        .iter()
        .map(|t| {
            let tf = target.monad.map(t, &|y: &usize| Ok(f.apply(*y)), &**base, &*target.carrier)?;
            target.apply(&tf)
        })
        .collect()
}

/// Derived structure of an algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InducedView {
    /// Powerset and downset algebras: `x ≤ y iff h({x,y}) = y`, with binary joins.
    Lattice { leq: Vec<(usize, usize)>, join: Vec<Vec<usize>> },
    /// Neighbourhood algebras: the induced Boolean algebra.
    Boolean {
        zero: usize,
        one: usize,
        neg: Vec<usize>,
        join: Vec<Vec<usize>>,
        meet: Vec<Vec<usize>>,
        atoms: Vec<usize>,
    },
    /// Distribution algebras: `h(r·x + (1-r)·y)` for grid weights `r`.
    Convex { table: Vec<(Rational, usize, usize, usize)> },
}

/// Computes the induced lattice, Boolean algebra or convex table.
pub fn induced_view(alg: &Algebra, opts: &Opts) -> Result<InducedView> {
    let x = &*alg.carrier;
    let n = x.len();
    let m = &alg.monad;
    match m {
        Monad::Powerset | Monad::Downset => {
            let pair = |a: usize, b: usize| -> Result<usize> {
                let mut s = vec![a, b];
                s.sort();
                s.dedup();
                let t = if matches!(m, Monad::Downset) {
                    TVal::Set(x.downclose(&s))
                } else {
                    TVal::Set(s)
                };
                alg.apply(&t)
            };
            let mut join = vec![vec![0; n]; n];
            let mut leq = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    join[a][b] = pair(a, b)?;
                    if join[a][b] == b {
                        leq.push((a, b));
                    }
                }
            }
            Ok(InducedView::Lattice { leq, join })
        }
        Monad::Neighbourhood => {
            let all: Vec<usize> = x.elements().collect();
            let subsets = {
                let mut s = all_subsets(&all);
                s.sort();
                s
            };
            let eta: Vec<Vec<Vec<usize>>> = all
                .iter()
                .map(|&e| match m.unit(x, &e)? {
                    TVal::Nbhd(v) => Ok(v),
                    _ => unreachable!(),
                })
                .collect::<Result<_>>()?;
            let h = |fam: Vec<Vec<usize>>| alg.apply(&TVal::Nbhd(fam));
            let zero = h(vec![])?;
            let one = h(subsets.clone())?;
            let neg = all
                .iter()
                .map(|&e| h(subsets.iter().filter(|s| eta[e].binary_search(s).is_err()).cloned().collect()))
                .collect::<Result<Vec<_>>>()?;
            let mut join = vec![vec![0; n]; n];
            let mut meet = vec![vec![0; n]; n];
            for a in 0..n {
                for b in 0..n {
                    let union: Vec<Vec<usize>> = subsets
                        .iter()
                        .filter(|s| eta[a].binary_search(s).is_ok() || eta[b].binary_search(s).is_ok())
                        .cloned()
                        .collect();
                    let inter: Vec<Vec<usize>> = eta[a].iter().filter(|s| eta[b].binary_search(s).is_ok()).cloned().collect();
                    join[a][b] = h(union)?;
                    meet[a][b] = h(inter)?;
                }
            }
            let leq = |a: usize, b: usize| meet[a][b] == a;
            let atoms = (0..n)
                .filter(|&a| a != zero && (0..n).all(|b| b == a || b == zero || !leq(b, a)))
                .collect();
            Ok(InducedView::Boolean {
                zero,
                one,
                neg,
                join,
                meet,
                atoms,
            })
        }
        Monad::Distribution => {
            let mut table = Vec::new();
            let d = opts.max_den.max(1) as i64;
            for k in 0..=d {
                let r = rat(k, d);
                for a in 0..n {
                    for b in 0..n {
                        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                        *acc.entry(a).or_insert_with(|| rat(0, 1)) += r.clone();
                        *acc.entry(b).or_insert_with(|| rat(0, 1)) += rat(1, 1) - r.clone();
                        let p = TVal::Dist(acc.into_iter().filter(|(_, q)| *q != rat(0, 1)).collect());
                        table.push((r.clone(), a, b, alg.apply(&p)?));
                    }
                }
            }
            Ok(InducedView::Convex { table })
        }
        _ => Err(Error::NotApplicable(format!("no induced view for the {m} monad"))),
    }
}
