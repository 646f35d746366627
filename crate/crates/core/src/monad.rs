//! Concrete monads on finite sets and finite posets.
//!
//! Monad operations are generic over a [`Space`] so the same code computes
//! `μ_X`, `μ_{TX}`, `T μ_X`, ... when checking laws on `T²X` and `T³X`.

use crate::error::{guard, Error, Result};
use crate::finite::{Carrier, Semiring};
use crate::report::Opts;
use crate::tvalue::{rat, Rational, TVal};
use num_traits::{One, Zero};
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Debug};
use std::hash::Hash;
use std::sync::{Arc, OnceLock};

/// A set of values the monads can act on: either a carrier, or `T` of
/// another space.
pub trait Space {
    type Elem: Clone + Ord + Hash + Debug;

    /// Every element, sorted. Fails if the space is infinite or too large to
    /// enumerate.
    fn elements(&self) -> Result<Arc<Vec<Self::Elem>>>;

    /// The order used by the downset monad; equality on discrete spaces.
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn render(&self, e: &Self::Elem) -> String;
}

impl Space for Carrier {
    type Elem = usize;

    fn elements(&self) -> Result<Arc<Vec<usize>>> {
        Ok(Arc::new(self.elements().collect()))
    }

    fn leq(&self, a: &usize, b: &usize) -> bool {
        Carrier::leq(self, *a, *b)
    }

    fn render(&self, e: &usize) -> String {
        self.name(*e).to_string()
    }
}

/// `T S` as a space in its own right. Its elements are enumerated lazily
/// and cached.
pub struct TSpace<'a, S: Space> {
    pub monad: &'a Monad,
    pub base: &'a S,
    opts: Opts,
    cache: OnceLock<Result<Arc<Vec<TVal<S::Elem>>>>>,
}

impl<'a, S: Space> TSpace<'a, S> {
    pub fn new(monad: &'a Monad, base: &'a S, opts: &Opts) -> Self {
        TSpace {
            monad,
            base,
            opts: opts.clone(),
            cache: OnceLock::new(),
        }
    }
}

impl<S: Space> Space for TSpace<'_, S> {
    type Elem = TVal<S::Elem>;

    fn elements(&self) -> Result<Arc<Vec<Self::Elem>>> {
        self.cache
            .get_or_init(|| self.monad.enumerate(self.base, &self.opts).map(Arc::new))
            .clone()
    }

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        match (self.monad, a, b) {
            (Monad::Downset, TVal::Set(x), TVal::Set(y)) => is_subset(x, y),
            _ => a == b,
        }
    }

    fn render(&self, e: &Self::Elem) -> String {
        self.monad.render(self.base, e)
    }
}

/// The monads shipped with the library.
#[derive(Clone, PartialEq, Eq)]
pub enum Monad {
    /// Finite subsets; `μ` is union.
    Powerset,
    /// Downward closed subsets of a poset; `μ` is union.
    Downset,
    /// Finitely supported weightings over a finite semiring.
    Multiset(Arc<Semiring>),
    /// Finitely supported probability distributions with rational weights.
    Distribution,
    /// `2^(2^X)`: sets of subsets.
    Neighbourhood,
    /// Words. `max_len` only bounds enumeration.
    List { max_len: usize },
}

impl Debug for Monad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Monad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

pub(crate) fn is_subset<E: Ord>(x: &[E], y: &[E]) -> bool {
    let mut j = 0;
    for e in x {
        while j < y.len() && y[j] < *e {
            j += 1;
        }
        if j == y.len() || y[j] != *e {
            return false;
        }
    }
    true
}

/// All subsets of `elems` in binary-counter order (bit `k` selects `elems[k]`).
/// Subsets are sorted when `elems` is.
pub fn all_subsets<E: Clone>(elems: &[E]) -> Vec<Vec<E>> {
    let n = elems.len();
    assert!(n < 32, "subset enumeration of {n} elements");
    (0u64..(1 << n))
        .map(|mask| (0..n).filter(|k| mask >> k & 1 == 1).map(|k| elems[k].clone()).collect())
        .collect()
}

fn pow_u128(base: u128, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn binom(n: u128, k: u128) -> Option<u128> {
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

impl Monad {
    pub fn name(&self) -> String {
        match self {
            Monad::Powerset => "powerset".into(),
            Monad::Downset => "downset".into(),
            Monad::Multiset(s) => format!("multiset({})", s.name),
            Monad::Distribution => "distribution".into(),
            Monad::Neighbourhood => "neighbourhood".into(),
            Monad::List { max_len } => format!("list(maxLen={max_len})"),
        }
    }

    /// The payload kind used by this monad.
    pub fn kind(&self) -> &'static str {
        match self {
            Monad::Powerset | Monad::Downset => "set",
            Monad::Multiset(_) => "weights",
            Monad::Distribution => "dist",
            Monad::Neighbourhood => "nbhd",
            Monad::List { .. } => "word",
        }
    }

    /// Whether `T X` is finite for finite `X`.
    pub fn is_finitary(&self) -> bool {
        !matches!(self, Monad::Distribution | Monad::List { .. })
    }

    /// Label describing the enumeration bound, for certificates.
    pub fn bound_label(&self, opts: &Opts) -> Option<String> {
        match self {
            Monad::Distribution => Some(format!("denominators<={}", opts.max_den)),
            Monad::List { max_len } => Some(format!("len<={max_len}")),
            _ => None,
        }
    }

    pub fn render<S: Space>(&self, sp: &S, tv: &TVal<S::Elem>) -> String {
        let scalar = |s: usize| match self {
            Monad::Multiset(sr) => sr.name_of(s).to_string(),
            _ => s.to_string(),
        };
        tv.render(&|e| sp.render(e), &scalar)
    }

    fn expect_kind<E>(&self, tv: &TVal<E>, ctx: &str) -> Result<()> {
        if tv.kind() == self.kind() {
            Ok(())
        } else {
            Err(Error::MalformedNesting(format!(
                "{ctx}: expected a {} value for the {} monad, found {}",
                self.kind(),
                self.name(),
                tv.kind()
            )))
        }
    }

    /// `η_X(x)`.
    pub fn unit<S: Space>(&self, sp: &S, x: &S::Elem) -> Result<TVal<S::Elem>> {
        Ok(match self {
            Monad::Powerset => TVal::Set(vec![x.clone()]),
            Monad::Downset => TVal::Set(sp.elements()?.iter().filter(|e| sp.leq(e, x)).cloned().collect()),
            Monad::Multiset(s) => TVal::Weights(vec![(x.clone(), s.one)]),
            Monad::Distribution => TVal::Dist(vec![(x.clone(), Rational::one())]),
            Monad::Neighbourhood => {
                let elems = sp.elements()?;
                guard("subsets for a neighbourhood unit", 1u128 << elems.len().min(127), 1 << 26)?;
                let mut v: Vec<Vec<S::Elem>> = all_subsets(&elems).into_iter().filter(|a| a.contains(x)).collect();
                v.sort();
                TVal::Nbhd(v)
            }
            Monad::List { .. } => TVal::Word(vec![x.clone()]),
        })
    }

    /// `T f`. The domain space is only consulted by the neighbourhood monad,
    /// the codomain space by the downset and neighbourhood monads.
    pub fn map<A: Space, B: Space>(
        &self,
        tv: &TVal<A::Elem>,
        f: &dyn Fn(&A::Elem) -> Result<B::Elem>,
        dom: &A,
        cod: &B,
    ) -> Result<TVal<B::Elem>> {
        self.expect_kind(tv, "map")?;
        Ok(match tv {
            TVal::Set(v) => {
                let img: BTreeSet<B::Elem> = v.iter().map(f).collect::<Result<_>>()?;
                match self {
                    Monad::Downset => TVal::Set(downclose(cod, &img.into_iter().collect::<Vec<_>>())?),
                    _ => TVal::Set(img.into_iter().collect()),
                }
            }
            TVal::Weights(v) => {
                let Monad::Multiset(s) = self else { unreachable!() };
                let mut acc: BTreeMap<B::Elem, usize> = BTreeMap::new();
                for (e, w) in v {
                    let slot = acc.entry(f(e)?).or_insert(s.zero);
                    *slot = s.add(*slot, *w);
                }
                TVal::Weights(acc.into_iter().filter(|(_, w)| *w != s.zero).collect())
            }
            TVal::Dist(v) => {
                let mut acc: BTreeMap<B::Elem, Rational> = BTreeMap::new();
                for (e, p) in v {
                    *acc.entry(f(e)?).or_insert_with(Rational::zero) += p;
                }
                TVal::Dist(acc.into_iter().filter(|(_, p)| !p.is_zero()).collect())
            }
            TVal::Word(v) => TVal::Word(v.iter().map(f).collect::<Result<_>>()?),
            TVal::Nbhd(family) => {
                // N f(Φ) = { B ⊆ Y | f⁻¹(B) ∈ Φ }. Only saturated members of Φ
                // are preimages; each contributes f(A) ∪ C for every C outside
                // the image of f.
                let dom_elems = dom.elements()?;
                let cod_elems = cod.elements()?;
                let images: Vec<B::Elem> = dom_elems.iter().map(f).collect::<Result<_>>()?;
                let image_set: BTreeSet<&B::Elem> = images.iter().collect();
                let outside: Vec<B::Elem> = cod_elems.iter().filter(|y| !image_set.contains(y)).cloned().collect();
                guard("subsets outside an image", 1u128 << outside.len().min(127), 1 << 26)?;
                let extras = all_subsets(&outside);
                let mut out: BTreeSet<Vec<B::Elem>> = BTreeSet::new();
                for a in family {
                    let fa: BTreeSet<B::Elem> = a.iter().map(f).collect::<Result<_>>()?;
                    let saturated = dom_elems
                        .iter()
                        .zip(&images)
                        .all(|(x, fx)| !fa.contains(fx) || a.binary_search(x).is_ok());
                    if !saturated {
                        continue;
                    }
                    for c in &extras {
                        let mut b: Vec<B::Elem> = fa.iter().cloned().chain(c.iter().cloned()).collect();
                        b.sort();
                        out.insert(b);
                    }
                }
                TVal::Nbhd(out.into_iter().collect())
            }
        })
    }

    /// `μ_X`.
    pub fn mult<S: Space>(&self, sp: &S, ttv: &TVal<TVal<S::Elem>>) -> Result<TVal<S::Elem>> {
        self.expect_kind(ttv, "outer value of mult")?;
        for inner in ttv.leaves() {
            self.expect_kind(inner, "inner value of mult")?;
        }
        Ok(match ttv {
            TVal::Set(v) => {
                let mut all: BTreeSet<S::Elem> = BTreeSet::new();
                for inner in v {
                    if let TVal::Set(s) = inner {
                        all.extend(s.iter().cloned());
                    }
                }
                TVal::Set(all.into_iter().collect())
            }
            TVal::Word(v) => {
                let mut out = Vec::new();
                for inner in v {
                    if let TVal::Word(w) = inner {
                        out.extend(w.iter().cloned());
                    }
                }
                TVal::Word(out)
            }
            TVal::Weights(v) => {
                let Monad::Multiset(s) = self else { unreachable!() };
                let mut acc: BTreeMap<S::Elem, usize> = BTreeMap::new();
                for (inner, w) in v {
                    if let TVal::Weights(iv) = inner {
                        for (x, u) in iv {
                            let slot = acc.entry(x.clone()).or_insert(s.zero);
                            *slot = s.add(*slot, s.mul(*w, *u));
                        }
                    }
                }
                TVal::Weights(acc.into_iter().filter(|(_, w)| *w != s.zero).collect())
            }
            TVal::Dist(v) => {
                let mut acc: BTreeMap<S::Elem, Rational> = BTreeMap::new();
                for (inner, p) in v {
                    if let TVal::Dist(iv) = inner {
                        for (x, q) in iv {
                            *acc.entry(x.clone()).or_insert_with(Rational::zero) += p * q;
                        }
                    }
                }
                TVal::Dist(acc.into_iter().filter(|(_, p)| !p.is_zero()).collect())
            }
            TVal::Nbhd(family) => {
                // μ(Ψ) = { A ⊆ X | {U ∈ NX | A ∈ U} ∈ Ψ }. A member 𝒰 of Ψ equals
                // {U | A ∈ U} iff it has half the size of NX and every U in it
                // contains A; at most one A qualifies.
                let n = sp.elements()?.len();
                if n >= 7 {
                    return Err(Error::ExplosionGuard {
                        what: "neighbourhood multiplication".into(),
                        needed: format!("2^(2^{n})"),
                        ceiling: 1 << 63,
                    });
                }
                let half = 1u128 << ((1u32 << n) - 1);
                let mut out: BTreeSet<Vec<S::Elem>> = BTreeSet::new();
                for member in family {
                    if member.len() as u128 != half {
                        continue;
                    }
                    let mut common: Option<Vec<Vec<S::Elem>>> = None;
                    for u in member {
                        let TVal::Nbhd(sets) = u else { unreachable!() };
                        common = Some(match common {
                            None => sets.clone(),
                            Some(c) => c.into_iter().filter(|a| sets.binary_search(a).is_ok()).collect(),
                        });
                    }
                    if let Some(c) = common {
                        out.extend(c);
                    }
                }
                TVal::Nbhd(out.into_iter().collect())
            }
        })
    }

    /// Kleisli extension `μ ∘ T f`, computed without materialising `T² Y`.
    /// For neighbourhoods this is `{U ⊆ Y | {x | U ∈ f(x)} ∈ Φ}`.
    pub fn bind<A: Space, B: Space>(
        &self,
        tv: &TVal<A::Elem>,
        f: &dyn Fn(&A::Elem) -> Result<TVal<B::Elem>>,
        dom: &A,
        cod: &B,
        opts: &Opts,
    ) -> Result<TVal<B::Elem>> {
        self.expect_kind(tv, "bind")?;
        let checked = |x: &A::Elem| -> Result<TVal<B::Elem>> {
            let v = f(x)?;
            self.expect_kind(&v, "result of a Kleisli map")?;
            Ok(v)
        };
        match tv {
            TVal::Set(v) => {
                let mut all: BTreeSet<B::Elem> = BTreeSet::new();
                for x in v {
                    all.extend(checked(x)?.leaves().into_iter().cloned());
                }
                Ok(TVal::Set(all.into_iter().collect()))
            }
            TVal::Nbhd(family) => {
                let dom_elems = dom.elements()?;
                let cod_elems = cod.elements()?;
                guard("subsets of a neighbourhood codomain", 1u128 << cod_elems.len().min(127), opts.max_enum)?;
                let images: Vec<Vec<Vec<B::Elem>>> = dom_elems
                    .iter()
                    .map(|x| match checked(x)? {
                        TVal::Nbhd(v) => Ok(v),
                        _ => unreachable!(),
                    })
                    .collect::<Result<_>>()?;
                let mut out = Vec::new();
                for u in all_subsets(&cod_elems) {
                    let pre: Vec<A::Elem> = dom_elems
                        .iter()
                        .zip(&images)
                        .filter(|(_, img)| img.binary_search(&u).is_ok())
                        .map(|(x, _)| x.clone())
                        .collect();
                    if family.binary_search(&pre).is_ok() {
                        out.push(u);
                    }
                }
                out.sort();
                Ok(TVal::Nbhd(out))
            }
            _ => {
                let tsp = TSpace::new(self, cod, opts);
                self.mult(cod, &self.map(tv, &checked, dom, &tsp)?)
            }
        }
    }

    /// Number of elements of `T X` for `|X| = n` within the enumeration bound,
    /// when this can be computed without enumerating.
    pub fn count(&self, n: usize, opts: &Opts) -> Option<u128> {
        match self {
            Monad::Powerset => pow_u128(2, n),
            Monad::Downset => None,
            Monad::Multiset(s) => pow_u128(s.len() as u128, n),
            Monad::Neighbourhood => {
                if n >= 7 {
                    None
                } else {
                    pow_u128(2, 1 << n)
                }
            }
            Monad::List { max_len } => {
                let mut total: u128 = 0;
                for k in 0..=*max_len {
                    total = total.checked_add(pow_u128(n as u128, k)?)?;
                }
                Some(total)
            }
            // Upper bound: compositions of each denominator.
            Monad::Distribution => {
                if n == 0 {
                    return Some(0);
                }
                let mut total: u128 = 0;
                for q in 1..=opts.max_den as u128 {
                    total = total.checked_add(binom(q + n as u128 - 1, n as u128 - 1)?)?;
                }
                Some(total)
            }
        }
    }

    /// Every element of `T S` within the bound, each once, sorted.
    pub fn enumerate<S: Space>(&self, sp: &S, opts: &Opts) -> Result<Vec<TVal<S::Elem>>> {
        let mut out = self.enumerate_unsorted(sp, opts)?;
        out.sort();
        Ok(out)
    }

    fn enumerate_unsorted<S: Space>(&self, sp: &S, opts: &Opts) -> Result<Vec<TVal<S::Elem>>> {
        let elems = sp.elements()?;
        let n = elems.len();
        let what = || format!("{} over {} elements", self.name(), n);
        match self.count(n, opts) {
            Some(c) => guard(what(), c, opts.max_enum)?,
            None if !matches!(self, Monad::Downset) => {
                return Err(Error::ExplosionGuard {
                    what: what(),
                    needed: "overflow".into(),
                    ceiling: opts.max_enum,
                })
            }
            None => {}
        }
        Ok(match self {
            Monad::Powerset => all_subsets(&elems).into_iter().map(TVal::Set).collect(),
            Monad::Downset => enumerate_downsets(sp, &elems, opts.max_enum)?.into_iter().map(TVal::Set).collect(),
            Monad::Multiset(s) => crate::finite::all_tables(n, s.len())
                .into_iter()
                .map(|t| {
                    TVal::Weights(
                        t.into_iter()
                            .enumerate()
                            .filter(|&(_, w)| w != s.zero)
                            .map(|(k, w)| (elems[k].clone(), w))
                            .collect(),
                    )
                })
                .collect(),
            Monad::Distribution => {
                let mut seen = BTreeSet::new();
                let mut out = Vec::new();
                for q in 1..=opts.max_den as i64 {
                    for comp in compositions(q as usize, n) {
                        let d: Vec<(S::Elem, Rational)> = comp
                            .iter()
                            .enumerate()
                            .filter(|&(_, &k)| k > 0)
                            .map(|(i, &k)| (elems[i].clone(), rat(k as i64, q)))
                            .collect();
                        let tv = TVal::Dist(d);
                        if seen.insert(tv.clone()) {
                            out.push(tv);
                        }
                    }
                }
                out
            }
            Monad::Neighbourhood => {
                let subsets = all_subsets(&elems);
                let mut sorted = subsets.clone();
                sorted.sort();
                all_subsets(&sorted).into_iter().map(TVal::Nbhd).collect()
            }
            Monad::List { max_len } => {
                let mut out = vec![TVal::Word(vec![])];
                let mut layer: Vec<Vec<S::Elem>> = vec![vec![]];
                for _ in 0..*max_len {
                    let mut next = Vec::new();
                    for w in &layer {
                        for e in elems.iter() {
                            let mut w2 = w.clone();
                            w2.push(e.clone());
                            next.push(w2);
                        }
                    }
                    out.extend(next.iter().cloned().map(TVal::Word));
                    layer = next;
                }
                out
            }
        })
    }

    /// A pseudo-random element of `T S`, drawing leaves from `pick`.
    pub fn sample<S: Space, R: Rng>(
        &self,
        sp: &S,
        pick: &mut dyn FnMut(&mut R) -> Result<S::Elem>,
        rng: &mut R,
        opts: &Opts,
    ) -> Result<TVal<S::Elem>> {
        Ok(match self {
            Monad::Powerset | Monad::Downset => {
                let k = rng.gen_range(0..=3);
                let mut v = Vec::with_capacity(k);
                for _ in 0..k {
                    v.push(pick(rng)?);
                }
                v.sort();
                v.dedup();
                if matches!(self, Monad::Downset) {
                    v = downclose(sp, &v)?;
                }
                TVal::Set(v)
            }
            Monad::Multiset(s) => {
                let k = rng.gen_range(0..=3);
                let mut acc: BTreeMap<S::Elem, usize> = BTreeMap::new();
                for _ in 0..k {
                    let e = pick(rng)?;
                    let w = rng.gen_range(0..s.len());
                    let slot = acc.entry(e).or_insert(s.zero);
                    *slot = s.add(*slot, w);
                }
                TVal::Weights(acc.into_iter().filter(|(_, w)| *w != s.zero).collect())
            }
            Monad::Distribution => {
                let q = rng.gen_range(1..=opts.max_den.max(1) as i64);
                let k = rng.gen_range(1..=3usize.min(q as usize));
                // k positive parts summing to q
                let mut cuts: BTreeSet<i64> = BTreeSet::new();
                while cuts.len() < k - 1 {
                    cuts.insert(rng.gen_range(1..q));
                }
                let mut bounds: Vec<i64> = vec![0];
                bounds.extend(cuts);
                bounds.push(q);
                let mut acc: BTreeMap<S::Elem, Rational> = BTreeMap::new();
                for w in bounds.windows(2) {
                    let e = pick(rng)?;
                    *acc.entry(e).or_insert_with(Rational::zero) += rat(w[1] - w[0], q);
                }
                TVal::Dist(acc.into_iter().collect())
            }
            Monad::Neighbourhood => {
                let elems = sp.elements()?;
                let k = rng.gen_range(0..=4);
                let mut fam: BTreeSet<Vec<S::Elem>> = BTreeSet::new();
                for _ in 0..k {
                    fam.insert(elems.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect());
                }
                TVal::Nbhd(fam.into_iter().collect())
            }
            Monad::List { max_len } => {
                let k = rng.gen_range(0..=*max_len);
                let mut v = Vec::with_capacity(k);
                for _ in 0..k {
                    v.push(pick(rng)?);
                }
                TVal::Word(v)
            }
        })
    }

    /// Checks that `tv` is a canonical element of `T S`.
    pub fn validate<S: Space>(&self, sp: &S, tv: &TVal<S::Elem>) -> Result<()> {
        self.expect_kind(tv, "value")?;
        let sorted_strict = |v: &[&S::Elem]| v.windows(2).all(|w| w[0] < w[1]);
        let bad = |m: &str| Err(Error::Invalid(format!("{}: {m}", self.render(sp, tv))));
        match tv {
            TVal::Set(v) => {
                if !sorted_strict(&v.iter().collect::<Vec<_>>()) {
                    return bad("elements not sorted or repeated");
                }
                if matches!(self, Monad::Downset) && downclose(sp, v)? != *v {
                    return bad("not downward closed");
                }
            }
            TVal::Weights(v) => {
                let Monad::Multiset(s) = self else { unreachable!() };
                if !sorted_strict(&v.iter().map(|(e, _)| e).collect::<Vec<_>>()) {
                    return bad("elements not sorted or repeated");
                }
                if v.iter().any(|(_, w)| *w == s.zero || *w >= s.len()) {
                    return bad("zero or unknown weight");
                }
            }
            TVal::Dist(v) => {
                if !sorted_strict(&v.iter().map(|(e, _)| e).collect::<Vec<_>>()) {
                    return bad("elements not sorted or repeated");
                }
                if v.iter().any(|(_, p)| *p <= Rational::zero() || *p > Rational::one()) {
                    return bad("probability outside (0,1]");
                }
                let total: Rational = v.iter().map(|(_, p)| p.clone()).sum();
                if !total.is_one() {
                    return bad("probabilities do not sum to 1");
                }
            }
            TVal::Nbhd(v) => {
                if !v.windows(2).all(|w| w[0] < w[1]) || !v.iter().all(|s| sorted_strict(&s.iter().collect::<Vec<_>>())) {
                    return bad("subsets not sorted or repeated");
                }
            }
            TVal::Word(_) => {}
        }
        Ok(())
    }
}

/// Downward closure of `xs` inside the space.
pub fn downclose<S: Space>(sp: &S, xs: &[S::Elem]) -> Result<Vec<S::Elem>> {
    Ok(sp
        .elements()?
        .iter()
        .filter(|e| xs.iter().any(|x| sp.leq(e, x)))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect())
}

/// All downsets, by extending along a linear extension of the order.
fn enumerate_downsets<S: Space>(sp: &S, elems: &[S::Elem], ceiling: u64) -> Result<Vec<Vec<S::Elem>>> {
    let n = elems.len();
    let below: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && sp.leq(&elems[j], &elems[i])).collect())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| below[i].len());
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut chosen = vec![false; n];
    fn rec(
        k: usize,
        order: &[usize],
        below: &[Vec<usize>],
        chosen: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
        ceiling: u64,
    ) -> bool {
        if k == order.len() {
            out.push((0..chosen.len()).filter(|&i| chosen[i]).collect());
            return (out.len() as u64) <= ceiling;
        }
        let x = order[k];
        if !rec(k + 1, order, below, chosen, out, ceiling) {
            return false;
        }
        if below[x].iter().all(|&y| chosen[y]) {
            chosen[x] = true;
            let ok = rec(k + 1, order, below, chosen, out, ceiling);
            chosen[x] = false;
            return ok;
        }
        true
    }
    if !rec(0, &order, &below, &mut chosen, &mut out, ceiling) {
        return Err(Error::ExplosionGuard {
            what: format!("downsets over {n} elements"),
            needed: format!(">{ceiling}"),
            ceiling,
        });
    }
    out.sort();
    Ok(out.into_iter().map(|s| s.into_iter().map(|i| elems[i].clone()).collect()).collect())
}

/// All ways to write `q` as an ordered sum of `n` non-negative parts.
fn compositions(q: usize, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if q == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
    }
    rec(0, q, &mut cur, &mut out);
    out
}
