//! Moore-shaped coalgebras `F X = X^A × B`, the distributive law
//! `λ : T F ⇒ F T` induced by an algebra on `B`, determinisation and
//! bialgebras.

use crate::algebra::{algebra_on_values, certify_hom, free_algebra, Algebra, AlgebraHom, AlgebraRef, Structure};
use crate::error::{guard, Error, Result};
use crate::finite::{Carrier, CarrierRef, Semiring};
use crate::generator::{check_generator_morphism, GeneratorTriple, Status};
use crate::laws::{mode_label, sample_t2, t_domain};
use crate::monad::{Monad, Space, TSpace};
use crate::report::{Mode, Opts, Report};
use crate::tvalue::{rat, rat_to_string, parse_rat, Rational, TVal, TValue};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

/// An output value: an element of a finite output algebra, or an exact
/// rational for expectation outputs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutVal {
    Elem(usize),
    Rat(Rational),
}

/// The algebra on the output set `B`.
#[derive(Clone, Debug, PartialEq)]
pub enum Outputs {
    Algebra(AlgebraRef),
    /// `[0,1] ∩ ℚ` with `h(Σ pᵢ rᵢ) = Σ pᵢ·rᵢ`, for the distribution monad.
    Expectation,
}

impl Outputs {
    /// The usual output algebra for accepting automata of each monad:
    /// disjunction for powerset and downset, the Boolean neighbourhood algebra,
    /// the semiring as a module over itself, and expectation for distributions.
    pub fn standard(m: &Monad) -> Result<Outputs> {
        let two = || Arc::new(Carrier::poset(["0", "1"], &[("0", "1")]).unwrap());
        Ok(match m {
            Monad::Powerset => Outputs::Algebra(Arc::new(Algebra::disjunctive())),
            Monad::Downset => Outputs::Algebra(Arc::new(Algebra::new(Monad::Downset, two(), Structure::Join)?)),
            Monad::Neighbourhood => Outputs::Algebra(Arc::new(Algebra::boolean_two())),
            Monad::Multiset(s) => Outputs::Algebra(Arc::new(semiring_module(s)?)),
            Monad::Distribution => Outputs::Expectation,
            Monad::List { .. } => return Err(Error::NotApplicable("list automata need an explicit monoid of outputs".into())),
        })
    }

    pub fn render(&self, v: &OutVal) -> String {
        match (self, v) {
            (Outputs::Algebra(a), OutVal::Elem(i)) if *i < a.len() => a.carrier.name(*i).to_string(),
            (_, OutVal::Rat(q)) => rat_to_string(q),
            (_, OutVal::Elem(i)) => format!("#{i}"),
        }
    }

    pub fn parse(&self, s: &str) -> Result<OutVal> {
        match self {
            Outputs::Algebra(a) => Ok(OutVal::Elem(a.carrier.index_of(s)?)),
            Outputs::Expectation => {
                let q = parse_rat(s).ok_or_else(|| Error::Invalid(format!("`{s}` is not a rational")))?;
                let v = OutVal::Rat(q);
                self.validate(&v)?;
                Ok(v)
            }
        }
    }

    pub fn validate(&self, v: &OutVal) -> Result<()> {
        match (self, v) {
            (Outputs::Algebra(a), OutVal::Elem(i)) if *i < a.len() => Ok(()),
            (Outputs::Expectation, OutVal::Rat(q)) if *q >= Rational::zero() && *q <= Rational::one() => Ok(()),
            _ => Err(Error::Invalid(format!("{} is not an output", self.render(v)))),
        }
    }

    /// `h_B`.
    pub fn evaluate(&self, t: &TVal<OutVal>) -> Result<OutVal> {
        match (self, t) {
            (Outputs::Expectation, TVal::Dist(v)) => {
                let mut acc = Rational::zero();
                for (o, p) in v {
                    match o {
                        OutVal::Rat(q) => acc += p * q,
                        OutVal::Elem(_) => return Err(Error::Invalid("expectation of a non-rational output".into())),
                    }
                }
                Ok(OutVal::Rat(acc))
            }
            (Outputs::Expectation, _) => Err(Error::MalformedNesting("expectation outputs need distributions".into())),
            (Outputs::Algebra(a), t) => {
                let idx = |o: &OutVal| match o {
                    OutVal::Elem(i) => Ok(*i),
                    OutVal::Rat(_) => Err(Error::Invalid("rational output for a finite output algebra".into())),
                };
                // Elem(i) ↦ i is order preserving, so canonical forms carry over.
                let tv: TValue = match t {
                    TVal::Set(v) => TVal::Set(v.iter().map(idx).collect::<Result<_>>()?),
                    TVal::Word(v) => TVal::Word(v.iter().map(idx).collect::<Result<_>>()?),
                    TVal::Weights(v) => TVal::Weights(v.iter().map(|(o, w)| Ok((idx(o)?, *w))).collect::<Result<_>>()?),
                    TVal::Dist(v) => TVal::Dist(v.iter().map(|(o, p)| Ok((idx(o)?, p.clone()))).collect::<Result<_>>()?),
                    TVal::Nbhd(v) => TVal::Nbhd(
                        v.iter()
                            .map(|s| s.iter().map(idx).collect::<Result<Vec<_>>>())
                            .collect::<Result<_>>()?,
                    ),
                };
                Ok(OutVal::Elem(a.apply(&tv)?))
            }
        }
    }

    fn monad_matches(&self, m: &Monad) -> bool {
        match self {
            Outputs::Algebra(a) => a.monad == *m,
            Outputs::Expectation => matches!(m, Monad::Distribution),
        }
    }
}

/// A semiring as a module over itself.
pub fn semiring_module(s: &Arc<Semiring>) -> Result<Algebra> {
    let c = Arc::new(Carrier::new(s.carrier.names().to_vec())?);
    Algebra::new(
        Monad::Multiset(s.clone()),
        c,
        Structure::Module {
            add: s.plus.clone(),
            zero: s.zero,
            act: s.times.clone(),
        },
    )
}

/// `B` as a space. Expectation outputs are infinite; their elements are the
/// grid `{k/n}` used for enumeration and sampling.
pub struct OutSpace<'a> {
    pub outputs: &'a Outputs,
    grid: u32,
}

impl<'a> OutSpace<'a> {
    pub fn new(outputs: &'a Outputs, opts: &Opts) -> Self {
        OutSpace {
            outputs,
            grid: opts.max_den.max(1),
        }
    }
}

impl Space for OutSpace<'_> {
    type Elem = OutVal;

    fn elements(&self) -> Result<Arc<Vec<OutVal>>> {
        Ok(Arc::new(match self.outputs {
            Outputs::Algebra(a) => a.carrier.elements().map(OutVal::Elem).collect(),
            Outputs::Expectation => (0..=self.grid).map(|k| OutVal::Rat(rat(k as i64, self.grid as i64))).collect(),
        }))
    }

    fn leq(&self, a: &OutVal, b: &OutVal) -> bool {
        match (self.outputs, a, b) {
            (Outputs::Algebra(alg), OutVal::Elem(i), OutVal::Elem(j)) => alg.carrier.leq(*i, *j),
            _ => a == b,
        }
    }

    fn render(&self, e: &OutVal) -> String {
        self.outputs.render(e)
    }
}

/// `F S = S^A × B` as a space, ordered pointwise.
pub struct FSpace<'a, S: Space> {
    pub base: &'a S,
    pub letters: usize,
    pub out: OutSpace<'a>,
    max_enum: u64,
    cache: OnceLock<Result<Arc<Vec<(Vec<S::Elem>, OutVal)>>>>,
}

impl<'a, S: Space> FSpace<'a, S> {
    pub fn new(base: &'a S, letters: usize, outputs: &'a Outputs, opts: &Opts) -> Self {
        FSpace {
            base,
            letters,
            out: OutSpace::new(outputs, opts),
            max_enum: opts.max_enum,
            cache: OnceLock::new(),
        }
    }
}

impl<S: Space> Space for FSpace<'_, S> {
    type Elem = (Vec<S::Elem>, OutVal);

    fn elements(&self) -> Result<Arc<Vec<Self::Elem>>> {
        self.cache
            .get_or_init(|| {
                let xs = self.base.elements()?;
                let bs = self.out.elements()?;
                let count = (xs.len() as u128).checked_pow(self.letters as u32).and_then(|c| c.checked_mul(bs.len() as u128));
                guard("F X", count.unwrap_or(u128::MAX), self.max_enum)?;
                let mut out = Vec::new();
                for table in crate::finite::all_tables(self.letters, xs.len()) {
                    let f: Vec<S::Elem> = table.iter().map(|&j| xs[j].clone()).collect();
                    for b in bs.iter() {
                        out.push((f.clone(), b.clone()));
                    }
                }
                out.sort();
                Ok(Arc::new(out))
            })
            .clone()
    }

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a.0.iter().zip(&b.0).all(|(x, y)| self.base.leq(x, y)) && self.out.leq(&a.1, &b.1)
    }

    fn render(&self, e: &Self::Elem) -> String {
        let f: Vec<String> = e.0.iter().map(|x| self.base.render(x)).collect();
        format!("(⟨{}⟩, {})", f.join(","), self.out.render(&e.1))
    }
}

/// The alphabet and output algebra of `F X = X^A × B`.
#[derive(Clone, Debug, PartialEq)]
pub struct MooreShape {
    pub alphabet: CarrierRef,
    pub outputs: Outputs,
}

/// `λ_X(t) = (a ↦ T(ev_a)(t), h_B(T(π_B)(t)))`.
#[derive(Clone, Debug)]
pub struct DistributiveLaw {
    pub monad: Monad,
    pub shape: MooreShape,
    pub certificate: Report,
}

pub const LAW_UNIT: &str = "distributive law: λ∘η_F = Fη";
pub const LAW_MULT: &str = "distributive law: λ∘μ_F = Fμ∘λ_T∘Tλ";

/// `(transitions per letter, output)`.
pub type FValue<E> = (Vec<TVal<E>>, OutVal);

impl DistributiveLaw {
    pub fn letters(&self) -> usize {
        self.shape.alphabet.len()
    }

    /// `(λ ∘ T g)(t)` for `g : Z → F S` given by `step` and `out`; with
    /// `g = id` this is `λ` itself.
    pub fn lambda_along<Z: Space, S: Space>(
        &self,
        t: &TVal<Z::Elem>,
        z: &Z,
        s: &S,
        step: &dyn Fn(&Z::Elem, usize) -> Result<S::Elem>,
        out: &dyn Fn(&Z::Elem) -> Result<OutVal>,
        opts: &Opts,
    ) -> Result<FValue<S::Elem>> {
        let m = &self.monad;
        let next = (0..self.letters())
            .map(|a| m.map(t, &|e: &Z::Elem| step(e, a), z, s))
            .collect::<Result<Vec<_>>>()?;
        let ospace = OutSpace::new(&self.shape.outputs, opts);
        let o = self.shape.outputs.evaluate(&m.map(t, out, z, &ospace)?)?;
        Ok((next, o))
    }

    /// `λ_S : T F S → F T S`.
    pub fn lambda<S: Space>(&self, t: &TVal<(Vec<S::Elem>, OutVal)>, fs: &FSpace<S>, opts: &Opts) -> Result<FValue<S::Elem>> {
        self.lambda_along(t, fs, fs.base, &|e, a| Ok(e.0[a].clone()), &|e| Ok(e.1.clone()), opts)
    }

    /// Checks `λ∘η_{FX} = Fη_X` on `F X` and `λ∘μ_{FX} = Fμ_X∘λ_{TX}∘Tλ_X`
    /// on `T²F X`.
    pub fn check_laws(&self, x: &Carrier, opts: &Opts) -> Result<Report> {
        let m = &self.monad;
        let fx = FSpace::new(x, self.letters(), &self.shape.outputs, opts);
        let mut r = Report::new();
        let elems = fx.elements()?;
        let mut bad = None;
        for e in elems.iter() {
            let lhs = self.lambda(&m.unit(&fx, e)?, &fx, opts)?;
            let rhs = (e.0.iter().map(|v| m.unit(x, v)).collect::<Result<Vec<_>>>()?, e.1.clone());
            if lhs != rhs {
                bad = Some(fx.render(e));
                break;
            }
        }
        r.push(LAW_UNIT, "exhaustive", elems.len() as u64, bad);

        let t1 = TSpace::new(m, &fx, opts);
        let tt = match opts.mode {
            Mode::Exhaustive => TSpace::new(m, &t1, opts).elements()?.to_vec(),
            Mode::Sampled { samples, .. } => sample_t2(m, &fx, &t1, opts, samples, 41)?,
        };
        let tx = TSpace::new(m, x, opts);
        let mut bad = None;
        for big in &tt {
            let lhs = self.lambda(&m.mult(&fx, big)?, &fx, opts)?;
            let inner = |t: &TVal<(Vec<usize>, OutVal)>| self.lambda(t, &fx, opts);
            let (next, o) = self.lambda_along(big, &t1, &tx, &|t, a| Ok(inner(t)?.0[a].clone()), &|t| Ok(inner(t)?.1), opts)?;
            let rhs = (next.iter().map(|tt| m.mult(x, tt)).collect::<Result<Vec<_>>>()?, o);
            if lhs != rhs {
                bad = Some(m.render(&t1, big));
                break;
            }
        }
        r.push(LAW_MULT, mode_label(m, opts), tt.len() as u64, bad);
        Ok(r)
    }
}

/// The distributive law induced by the output algebra, with its two diagrams
/// certified on a one-element `X`. Exhaustive checking falls back to 200
/// samples when `T²F X` is too large; the certificate records which was used.
pub fn canonical_law(monad: &Monad, shape: MooreShape, opts: &Opts) -> Result<DistributiveLaw> {
    if !shape.outputs.monad_matches(monad) {
        return Err(Error::CarrierMismatch(format!("output algebra is not a {monad} algebra")));
    }
    let mut law = DistributiveLaw {
        monad: monad.clone(),
        shape,
        certificate: Report::new(),
    };
    let x = Carrier::new(["x"])?;
    let r = match law.check_laws(&x, opts) {
        Err(Error::ExplosionGuard { .. }) if opts.mode == Mode::Exhaustive => {
            law.check_laws(&x, &opts.clone().with_mode(Mode::sampled(200, opts.seed())))?
        }
        other => other?,
    };
    if let Some(c) = r.first_failure() {
        return Err(Error::LawFailed {
            law: c.law.clone(),
            witness: c.witness.clone().unwrap_or_default(),
        });
    }
    law.certificate = r;
    Ok(law)
}

/// A deterministic Moore machine `X → X^A × B`.
#[derive(Clone, Debug, PartialEq)]
pub struct FCoalgebra {
    pub carrier: CarrierRef,
    pub alphabet: CarrierRef,
    /// `trans[state][letter]`.
    pub trans: Vec<Vec<usize>>,
    pub out: Vec<OutVal>,
}

impl FCoalgebra {
    pub fn new(carrier: CarrierRef, alphabet: CarrierRef, trans: Vec<Vec<usize>>, out: Vec<OutVal>) -> Result<Self> {
        let n = carrier.len();
        if trans.len() != n || out.len() != n || trans.iter().any(|r| r.len() != alphabet.len() || r.iter().any(|&q| q >= n)) {
            return Err(Error::CarrierMismatch("transition or output table is not total".into()));
        }
        Ok(FCoalgebra {
            carrier,
            alphabet,
            trans,
            out,
        })
    }

    /// State reached from `start` along `word`.
    pub fn run(&self, start: usize, word: &[usize]) -> usize {
        word.iter().fold(start, |q, &a| self.trans[q][a])
    }
}

/// A coalgebra `X → (T X)^A × B`.
#[derive(Clone, Debug, PartialEq)]
pub struct FTCoalgebra {
    pub monad: Monad,
    pub carrier: CarrierRef,
    pub alphabet: CarrierRef,
    pub trans: Vec<Vec<TValue>>,
    pub out: Vec<OutVal>,
}

impl FTCoalgebra {
    pub fn new(monad: Monad, carrier: CarrierRef, alphabet: CarrierRef, trans: Vec<Vec<TValue>>, out: Vec<OutVal>) -> Result<Self> {
        let n = carrier.len();
        if trans.len() != n || out.len() != n || trans.iter().any(|r| r.len() != alphabet.len()) {
            return Err(Error::CarrierMismatch("transition or output table is not total".into()));
        }
        for t in trans.iter().flatten() {
            monad.validate(&*carrier, t)?;
        }
        Ok(FTCoalgebra {
            monad,
            carrier,
            alphabet,
            trans,
            out,
        })
    }

    /// The Kleisli step `μ ∘ T(π_a ∘ k)` on `T X`.
    pub fn step(&self, t: &TValue, a: usize, opts: &Opts) -> Result<TValue> {
        self.monad.bind(t, &|x: &usize| Ok(self.trans[*x][a].clone()), &*self.carrier, &*self.carrier, opts)
    }

    /// `h_B ∘ T(out)` on `T X`.
    pub fn output(&self, t: &TValue, outputs: &Outputs, opts: &Opts) -> Result<OutVal> {
        let os = OutSpace::new(outputs, opts);
        outputs.evaluate(&self.monad.map(t, &|x: &usize| Ok(self.out[*x].clone()), &*self.carrier, &os)?)
    }
}

/// An algebra and an `F`-coalgebra on one carrier. `partial` marks bialgebras
/// built on a reachable part of `T X`, whose structure map is only defined
/// where `μ` stays inside the part.
#[derive(Clone, Debug)]
pub struct Bialgebra {
    pub algebra: AlgebraRef,
    pub coalgebra: FCoalgebra,
    pub law: Arc<DistributiveLaw>,
    pub certificate: Report,
    pub partial: bool,
}

pub const PENTAGON: &str = "pentagon: k∘h = Fh∘λ∘Tk";

/// Checks `k∘h = Fh∘λ_X∘Tk` on `T X`. For partial bialgebras, elements where
/// `h` is undefined are skipped and the certificate says so.
pub fn check_bialgebra(algebra: &Algebra, coalgebra: &FCoalgebra, law: &DistributiveLaw, partial: bool, opts: &Opts) -> Result<Report> {
    if algebra.carrier != coalgebra.carrier || law.shape.alphabet != coalgebra.alphabet || algebra.monad != law.monad {
        return Err(Error::CarrierMismatch("algebra, coalgebra and law disagree".into()));
    }
    let m = &algebra.monad;
    let x = &*algebra.carrier;
    let dom = t_domain(m, x, opts, 43)?;
    let mut checked = 0u64;
    let mut bad = None;
    for t in &dom {
        let hx = match algebra.apply(t) {
            Ok(v) => v,
            Err(_) if partial => continue,
            Err(e) => return Err(e),
        };
        let (next, o) = law.lambda_along(t, x, x, &|q, a| Ok(coalgebra.trans[*q][a]), &|q| Ok(coalgebra.out[*q].clone()), opts)?;
        let fh: Result<Vec<usize>> = next.iter().map(|n| algebra.apply(n)).collect();
        let fh = match fh {
            Ok(v) => v,
            Err(_) if partial => continue,
            Err(e) => return Err(e),
        };
        checked += 1;
        if fh != coalgebra.trans[hx] || o != coalgebra.out[hx] {
            bad = Some(algebra.render(t));
            break;
        }
    }
    let mut label = mode_label(m, opts);
    if partial {
        label += ", partial";
    }
    let mut r = Report::new();
    r.push(PENTAGON, label, checked, bad);
    Ok(r)
}

/// Where determinisation explores `T X`.
#[derive(Clone, Debug)]
pub enum DetMode {
    Full,
    /// The part of `T X` reachable from the given values.
    Reachable(Vec<TValue>),
}

/// `k♯ = Fμ_X ∘ λ_{TX} ∘ T k` on `(T X, μ_X)`. By naturality of `λ` its
/// `a`-component is the Kleisli step `μ ∘ T(π_a ∘ k)` and its output is
/// `h_B ∘ T(out)`; those are what is computed. The pentagon of the result is
/// then checked against `λ` itself.
pub fn determinize(ft: &FTCoalgebra, law: &Arc<DistributiveLaw>, mode: DetMode, opts: &Opts) -> Result<Bialgebra> {
    if ft.monad != law.monad || ft.alphabet != law.shape.alphabet {
        return Err(Error::CarrierMismatch("coalgebra and distributive law disagree".into()));
    }
    let letters = ft.alphabet.len();
    let (algebra, partial) = match &mode {
        DetMode::Full => (free_algebra(&ft.monad, &ft.carrier, opts)?, false),
        DetMode::Reachable(starts) => {
            let mut seen: BTreeMap<TValue, ()> = BTreeMap::new();
            let mut frontier: Vec<TValue> = Vec::new();
            for s in starts {
                ft.monad.validate(&*ft.carrier, s)?;
                if seen.insert(s.clone(), ()).is_none() {
                    frontier.push(s.clone());
                }
            }
            while let Some(t) = frontier.pop() {
                for a in 0..letters {
                    let n = ft.step(&t, a, opts)?;
                    if !seen.contains_key(&n) {
                        guard("reachable states", seen.len() as u128 + 1, opts.max_enum)?;
                        seen.insert(n.clone(), ());
                        frontier.push(n);
                    }
                }
            }
            (algebra_on_values(&ft.monad, &ft.carrier, seen.into_keys().collect())?, true)
        }
    };
    let n = algebra.len();
    let mut trans = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    for p in 0..n {
        let t = algebra.free_value(p).unwrap();
        trans.push(
            (0..letters)
                .map(|a| algebra.free_position(&ft.step(t, a, opts)?))
                .collect::<Result<Vec<_>>>()?,
        );
        out.push(ft.output(t, &law.shape.outputs, opts)?);
    }
    let algebra = Arc::new(algebra);
    let coalgebra = FCoalgebra::new(algebra.carrier.clone(), ft.alphabet.clone(), trans, out)?;
    let certificate = check_bialgebra(&algebra, &coalgebra, law, partial, opts)?;
    if let Some(c) = certificate.first_failure() {
        return Err(Error::LawFailed {
            law: c.law.clone(),
            witness: c.witness.clone().unwrap_or_default(),
        });
    }
    Ok(Bialgebra {
        algebra,
        coalgebra,
        law: law.clone(),
        certificate,
        partial,
    })
}

/// Checks `f` is an `F`-coalgebra homomorphism: transitions and outputs commute.
pub fn check_coalgebra_hom(source: &FCoalgebra, target: &FCoalgebra, map: &[usize]) -> Report {
    let mut r = Report::new();
    let mut bad = None;
    'outer: for p in source.carrier.elements() {
        for a in source.alphabet.elements() {
            if map[source.trans[p][a]] != target.trans[map[p]][a] {
                bad = Some(format!("{} --{}-->", source.carrier.name(p), source.alphabet.name(a)));
                break 'outer;
            }
        }
    }
    r.push("coalgebra hom: transitions", "exhaustive", source.carrier.len() as u64, bad);
    let bad = source.carrier.elements().find(|&p| source.out[p] != target.out[map[p]]);
    r.push("coalgebra hom: outputs", "exhaustive", source.carrier.len() as u64, bad.map(|p| source.carrier.name(p).to_string()));
    r
}

/// The free bialgebra `(TY, μ_Y, (Fd∘k∘i)♯)` with `i♯` into the original, and
/// `d` in the other direction when the generator is a basis.
#[derive(Clone, Debug)]
pub struct FreeBialgebra {
    pub generated: FTCoalgebra,
    pub bialgebra: Bialgebra,
    pub i_sharp: AlgebraHom,
    pub d: Option<AlgebraHom>,
    pub report: Report,
}

/// The `F T`-coalgebra `Fd ∘ k ∘ i` on `Y`.
pub fn generated_coalgebra(b: &Bialgebra, g: &GeneratorTriple) -> Result<FTCoalgebra> {
    if g.algebra != b.algebra {
        return Err(Error::CarrierMismatch("generator is not for this bialgebra's algebra".into()));
    }
    let trans = g
        .i
        .iter()
        .map(|&x| b.coalgebra.trans[x].iter().map(|&q| g.d[q].clone()).collect())
        .collect();
    let out = g.i.iter().map(|&x| b.coalgebra.out[x].clone()).collect();
    FTCoalgebra::new(b.algebra.monad.clone(), g.y.clone(), b.coalgebra.alphabet.clone(), trans, out)
}

/// Builds `(TY, μ_Y, (Fd∘k∘i)♯)` and certifies `i♯` as an algebra and
/// coalgebra homomorphism into `b`; for a basis also `d` as the inverse
/// bialgebra homomorphism.
pub fn free_bialgebra_from_generator(b: &Bialgebra, g: &GeneratorTriple, opts: &Opts) -> Result<FreeBialgebra> {
    if g.status == Status::Unchecked {
        return Err(Error::Invalid("the triple is not a certified generator".into()));
    }
    let generated = generated_coalgebra(b, g)?;
    let free = determinize(&generated, &b.law, DetMode::Full, opts)?;
    let fa = &free.algebra;
    let table = (0..fa.len())
        .map(|p| g.i_sharp(fa.free_value(p).unwrap()))
        .collect::<Result<Vec<_>>>()?;
    let i_sharp = certify_hom(fa.clone(), b.algebra.clone(), table, opts)?;
    let mut report = Report::new();
    for c in &i_sharp.certificate.certificates {
        report.push(format!("i♯ {}", c.law), c.mode.clone(), c.instances, c.witness.clone());
    }
    for c in check_coalgebra_hom(&free.coalgebra, &b.coalgebra, &i_sharp.map).certificates {
        report.push(format!("i♯ {}", c.law), c.mode, c.instances, c.witness);
    }
    let d = if g.status == Status::Basis {
        let table = g.d.iter().map(|t| fa.free_position(t)).collect::<Result<Vec<_>>>()?;
        let d = certify_hom(b.algebra.clone(), fa.clone(), table, opts)?;
        for c in &d.certificate.certificates {
            report.push(format!("d {}", c.law), c.mode.clone(), c.instances, c.witness.clone());
        }
        for c in check_coalgebra_hom(&b.coalgebra, &free.coalgebra, &d.map).certificates {
            report.push(format!("d {}", c.law), c.mode, c.instances, c.witness);
        }
        let bad = (0..fa.len()).find(|&p| d.map[i_sharp.map[p]] != p);
        report.push("d∘i♯ = id_TY", "exhaustive", fa.len() as u64, bad.map(|p| fa.carrier.name(p).to_string()));
        let bad = (0..b.algebra.len()).find(|&x| i_sharp.map[d.map[x]] != x);
        report.push("i♯∘d = id_X", "exhaustive", b.algebra.len() as u64, bad.map(|x| b.algebra.carrier.name(x).to_string()));
        Some(d)
    } else {
        None
    };
    Ok(FreeBialgebra {
        generated,
        bialgebra: free,
        i_sharp,
        d,
        report,
    })
}

/// For a generator morphism `f : Y_α → Y_β`, certifies `T f` as a bialgebra
/// homomorphism between the free bialgebras and `(i_β)♯ ∘ Tf = (i_α)♯`.
pub fn generator_morphism_lift(
    alpha: &GeneratorTriple,
    beta: &GeneratorTriple,
    f: &[usize],
    b: &Bialgebra,
    opts: &Opts,
) -> Result<(AlgebraHom, Report)> {
    let mut report = check_generator_morphism(alpha, beta, f)?;
    let fa = free_bialgebra_from_generator(b, alpha, opts)?;
    let fb = free_bialgebra_from_generator(b, beta, opts)?;
    let (sa, sb) = (&fa.bialgebra.algebra, &fb.bialgebra.algebra);
    let m = &b.algebra.monad;
    let table = (0..sa.len())
        .map(|p| sb.free_position(&m.map(sa.free_value(p).unwrap(), &|y: &usize| Ok(f[*y]), &*alpha.y, &*beta.y)?))
        .collect::<Result<Vec<_>>>()?;
    let tf = certify_hom(sa.clone(), sb.clone(), table, opts)?;
    for c in &tf.certificate.certificates {
        report.push(format!("Tf {}", c.law), c.mode.clone(), c.instances, c.witness.clone());
    }
    for c in check_coalgebra_hom(&fa.bialgebra.coalgebra, &fb.bialgebra.coalgebra, &tf.map).certificates {
        report.push(format!("Tf {}", c.law), c.mode, c.instances, c.witness);
    }
    let bad = (0..sa.len()).find(|&p| fb.i_sharp.map[tf.map[p]] != fa.i_sharp.map[p]);
    report.push("triangle: (i_β)♯∘Tf = (i_α)♯", "exhaustive", sa.len() as u64, bad.map(|p| sa.carrier.name(p).to_string()));
    Ok((tf, report))
}

pub const GEN_COALGEBRA: &str = "bialgebra generator: k∘i = Fi∘k_Y";
pub const GEN_D: &str = "bialgebra generator: Fd∘k = λ_Y∘Tk_Y∘d";
pub const GEN_ALGEBRA: &str = "bialgebra generator: h∘Ti∘d = id_X";
pub const BASIS_TY: &str = "bialgebra basis: d∘h∘Ti = id_TY";
pub const SAME_STRUCTURE: &str = "coalgebra structures coincide: λ_Y∘Tk_Y = (Fd∘k∘i)♯";

/// A candidate generator `(Y, k_Y, i, d)` of a bialgebra.
#[derive(Clone, Debug)]
pub struct BialgebraCandidate {
    pub y: CarrierRef,
    pub k_y: FCoalgebra,
    pub i: Vec<usize>,
    pub d: Vec<TValue>,
}

/// The three generator diagrams, pointwise on `Y` and `X`.
pub fn check_bialgebra_generator(b: &Bialgebra, c: &BialgebraCandidate, opts: &Opts) -> Result<Report> {
    let law = &b.law;
    let m = &law.monad;
    let (x, y) = (&b.algebra.carrier, &c.y);
    let k = &b.coalgebra;
    if c.k_y.carrier != *y || c.i.len() != y.len() || c.d.len() != x.len() {
        return Err(Error::CarrierMismatch("candidate shapes do not match".into()));
    }
    let mut r = Report::new();
    let bad = y.elements().find(|&v| {
        let p = c.i[v];
        k.out[p] != c.k_y.out[v] || (0..law.letters()).any(|a| k.trans[p][a] != c.i[c.k_y.trans[v][a]])
    });
    r.push(GEN_COALGEBRA, "exhaustive", y.len() as u64, bad.map(|v| y.name(v).to_string()));

    let mut bad = None;
    for p in x.elements() {
        let lhs: FValue<usize> = (k.trans[p].iter().map(|&q| c.d[q].clone()).collect(), k.out[p].clone());
        let rhs = law.lambda_along(&c.d[p], &**y, &**y, &|v, a| Ok(c.k_y.trans[*v][a]), &|v| Ok(c.k_y.out[*v].clone()), opts)?;
        if lhs != rhs {
            bad = Some(x.name(p).to_string());
            break;
        }
    }
    r.push(GEN_D, "exhaustive", x.len() as u64, bad);

    let mut bad = None;
    for p in x.elements() {
        let back = b.algebra.apply(&m.map(&c.d[p], &|v: &usize| Ok(c.i[*v]), &**y, &**x)?)?;
        if back != p {
            bad = Some(x.name(p).to_string());
            break;
        }
    }
    r.push(GEN_ALGEBRA, "exhaustive", x.len() as u64, bad);
    Ok(r)
}

/// All four diagrams for a candidate basis of a bialgebra; when they hold,
/// also the coincidence of `λ_Y∘Tk_Y` with `(Fd∘k∘i)♯` on `T Y`.
pub fn bialgebra_basis_check(b: &Bialgebra, c: &BialgebraCandidate, opts: &Opts) -> Result<Report> {
    let mut r = check_bialgebra_generator(b, c, opts)?;
    let law = &b.law;
    let m = &law.monad;
    let (x, y) = (&b.algebra.carrier, &c.y);
    let ty = t_domain(m, &**y, opts, 47)?;
    let mut bad = None;
    for t in &ty {
        let back = &c.d[b.algebra.apply(&m.map(t, &|v: &usize| Ok(c.i[*v]), &**y, &**x)?)?];
        if back != t {
            bad = Some(m.render(&**y, t));
            break;
        }
    }
    r.push(BASIS_TY, mode_label(m, opts), ty.len() as u64, bad);
    if r.ok() {
        let k = &b.coalgebra;
        let mut bad = None;
        for t in &ty {
            let lhs = law.lambda_along(t, &**y, &**y, &|v, a| Ok(c.k_y.trans[*v][a]), &|v| Ok(c.k_y.out[*v].clone()), opts)?;
            let next = (0..law.letters())
                .map(|a| m.bind(t, &|v: &usize| Ok(c.d[k.trans[c.i[*v]][a]].clone()), &**y, &**y, opts))
                .collect::<Result<Vec<_>>>()?;
            let os = OutSpace::new(&law.shape.outputs, opts);
            let o = law.shape.outputs.evaluate(&m.map(t, &|v: &usize| Ok(k.out[c.i[*v]].clone()), &**y, &os)?)?;
            if lhs != (next, o) {
                bad = Some(m.render(&**y, t));
                break;
            }
        }
        r.push(SAME_STRUCTURE, mode_label(m, opts), ty.len() as u64, bad);
    }
    Ok(r)
}

/// From a basis of the underlying algebra, the bialgebra generator
/// `(TY, (Fd∘k∘i)♯, i♯, η_{TY}∘d)`, certified.
pub fn bialgebra_generator_from_basis(b: &Bialgebra, basis: &GeneratorTriple, opts: &Opts) -> Result<(BialgebraCandidate, Report)> {
    if basis.status != Status::Basis {
        return Err(Error::Invalid("an algebra basis is required".into()));
    }
    let fb = free_bialgebra_from_generator(b, basis, opts)?;
    let fa = &fb.bialgebra.algebra;
    let m = &b.algebra.monad;
    let d = basis
        .d
        .iter()
        .map(|t| m.unit(&*fa.carrier, &fa.free_position(t)?))
        .collect::<Result<Vec<_>>>()?;
    let cand = BialgebraCandidate {
        y: fa.carrier.clone(),
        k_y: fb.bialgebra.coalgebra.clone(),
        i: fb.i_sharp.map.clone(),
        d,
    };
    let r = check_bialgebra_generator(b, &cand, opts)?;
    Ok((cand, r))
}

/// Outputs along every word of length at most `n` from `start`.
pub fn bounded_language(fc: &FCoalgebra, start: usize, n: usize) -> BTreeMap<Vec<usize>, OutVal> {
    let mut table = BTreeMap::new();
    let mut layer = vec![(Vec::new(), start)];
    for len in 0..=n {
        let mut next = Vec::new();
        for (w, q) in layer {
            table.insert(w.clone(), fc.out[q].clone());
            if len < n {
                for a in fc.alphabet.elements() {
                    let mut w2 = w.clone();
                    w2.push(a);
                    next.push((w2, fc.trans[q][a]));
                }
            }
        }
        layer = next;
    }
    table
}

/// Outputs along every word of length at most `n`, simulating the
/// `F T`-coalgebra on `T X` from `start`.
pub fn lifted_language(ft: &FTCoalgebra, outputs: &Outputs, start: &TValue, n: usize, opts: &Opts) -> Result<BTreeMap<Vec<usize>, OutVal>> {
    let mut table = BTreeMap::new();
    let mut layer = vec![(Vec::new(), start.clone())];
    for len in 0..=n {
        let mut next = Vec::new();
        for (w, t) in layer {
            table.insert(w.clone(), ft.output(&t, outputs, opts)?);
            if len < n {
                for a in ft.alphabet.elements() {
                    let mut w2 = w.clone();
                    w2.push(a);
                    next.push((w2, ft.step(&t, a, opts)?));
                }
            }
        }
        layer = next;
    }
    Ok(table)
}

pub(crate) fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering of a Moore machine.
pub fn fcoalgebra_dot(fc: &FCoalgebra, outputs: &Outputs) -> String {
    let mut s = String::from("digraph moore {\n  rankdir=LR;\n");
    for p in fc.carrier.elements() {
        s += &format!(
            "  s{p} [label=\"{} / {}\"];\n",
            dot_escape(fc.carrier.name(p)),
            dot_escape(&outputs.render(&fc.out[p]))
        );
    }
    for p in fc.carrier.elements() {
        for a in fc.alphabet.elements() {
            s += &format!("  s{p} -> s{} [label=\"{}\"];\n", fc.trans[p][a], dot_escape(fc.alphabet.name(a)));
        }
    }
    s + "}\n"
}

/// Graphviz rendering of an `F T`-coalgebra. Set, weighted and probabilistic
/// transitions become labelled edges; words and neighbourhoods get a box node.
pub fn ftcoalgebra_dot(ft: &FTCoalgebra, outputs: &Outputs) -> String {
    let mut s = String::from("digraph automaton {\n  rankdir=LR;\n");
    let c = &ft.carrier;
    for p in c.elements() {
        s += &format!("  s{p} [label=\"{} / {}\"];\n", dot_escape(c.name(p)), dot_escape(&outputs.render(&ft.out[p])));
    }
    let scalar = |w: usize| match &ft.monad {
        Monad::Multiset(sr) => sr.name_of(w).to_string(),
        _ => w.to_string(),
    };
    for p in c.elements() {
        for a in ft.alphabet.elements() {
            let letter = dot_escape(ft.alphabet.name(a));
            match &ft.trans[p][a] {
                TVal::Set(v) => v.iter().for_each(|q| s += &format!("  s{p} -> s{q} [label=\"{letter}\"];\n")),
                TVal::Weights(v) => v
                    .iter()
                    .for_each(|(q, w)| s += &format!("  s{p} -> s{q} [label=\"{letter}:{}\"];\n", dot_escape(&scalar(*w)))),
                TVal::Dist(v) => v
                    .iter()
                    .for_each(|(q, pr)| s += &format!("  s{p} -> s{q} [label=\"{letter}:{}\"];\n", rat_to_string(pr))),
                t => {
                    s += &format!("  t{p}_{a} [shape=box,label=\"{}\"];\n", dot_escape(&ft.monad.render(&**c, t)));
                    s += &format!("  s{p} -> t{p}_{a} [label=\"{letter}\"];\n");
                }
            }
        }
    }
    s + "}\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{canonical_free_basis, exhaustive, identity_generator};

    fn letters(names: &[&str]) -> CarrierRef {
        Arc::new(Carrier::new(names.iter().copied()).unwrap())
    }

    fn powerset_law(alphabet: &CarrierRef) -> Arc<DistributiveLaw> {
        let shape = MooreShape {
            alphabet: alphabet.clone(),
            outputs: Outputs::standard(&Monad::Powerset).unwrap(),
        };
        Arc::new(canonical_law(&Monad::Powerset, shape, &exhaustive()).unwrap())
    }

    /// States p, q; a: p → {p,q}, q → ∅; q accepting.
    fn small_nfa() -> FTCoalgebra {
        let states = letters(&["p", "q"]);
        FTCoalgebra::new(
            Monad::Powerset,
            states,
            letters(&["a"]),
            vec![vec![TVal::Set(vec![0, 1])], vec![TVal::Set(vec![])]],
            vec![OutVal::Elem(0), OutVal::Elem(1)],
        )
        .unwrap()
    }

    /// Accepts words over {a,b} ending in a: states s (start), f (final).
    fn ends_in_a() -> FCoalgebra {
        FCoalgebra::new(letters(&["s", "f"]), letters(&["a", "b"]), vec![vec![1, 0], vec![1, 0]], vec![OutVal::Elem(0), OutVal::Elem(1)]).unwrap()
    }

    /// Path-based acceptance, independent of the monad code.
    fn nfa_accepts(ft: &FTCoalgebra, start: usize, word: &[usize]) -> bool {
        let mut cur = vec![start];
        for &a in word {
            let mut next: Vec<usize> = cur.iter().flat_map(|&q| ft.trans[q][a].leaves().into_iter().copied().collect::<Vec<_>>()).collect();
            next.sort();
            next.dedup();
            cur = next;
        }
        cur.iter().any(|&q| ft.out[q] == OutVal::Elem(1))
    }

    fn words(letters: usize, n: usize) -> Vec<Vec<usize>> {
        let mut all = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..n {
            layer = layer
                .iter()
                .flat_map(|w: &Vec<usize>| {
                    (0..letters).map(move |a| {
                        let mut w = w.clone();
                        w.push(a);
                        w
                    })
                })
                .collect();
            all.extend(layer.clone());
        }
        all
    }

    #[test]
    fn powerset_law_is_componentwise() {
        let a = letters(&["a"]);
        let law = powerset_law(&a);
        let x = Carrier::new(["x0", "x1"]).unwrap();
        let opts = exhaustive();
        let fx = FSpace::new(&x, 1, &law.shape.outputs, &opts);
        let t = TVal::Set(vec![(vec![0], OutVal::Elem(0)), (vec![1], OutVal::Elem(1))]);
        assert_eq!(law.lambda(&t, &fx, &opts).unwrap(), (vec![TVal::Set(vec![0, 1])], OutVal::Elem(1)));
        let single = Monad::Powerset.unit(&fx, &(vec![1], OutVal::Elem(0))).unwrap();
        assert_eq!(law.lambda(&single, &fx, &opts).unwrap(), (vec![TVal::Set(vec![1])], OutVal::Elem(0)));
    }

    #[test]
    fn expectation_law() {
        let opts = exhaustive();
        let shape = MooreShape {
            alphabet: letters(&["a"]),
            outputs: Outputs::Expectation,
        };
        let law = canonical_law(&Monad::Distribution, shape, &opts).unwrap();
        let x = Carrier::new(["x0", "x1"]).unwrap();
        let fx = FSpace::new(&x, 1, &law.shape.outputs, &opts);
        let t = TVal::Dist(vec![((vec![0], OutVal::Rat(rat(0, 1))), rat(1, 2)), ((vec![1], OutVal::Rat(rat(1, 1))), rat(1, 2))]);
        let (next, o) = law.lambda(&t, &fx, &opts).unwrap();
        assert_eq!(o, OutVal::Rat(rat(1, 2)));
        assert_eq!(next, vec![TVal::Dist(vec![(0, rat(1, 2)), (1, rat(1, 2))])]);
    }

    #[test]
    fn laws_hold_for_every_standard_shape() {
        let sampled = exhaustive().with_mode(Mode::sampled(40, 3)).with_max_den(4);
        for m in [
            Monad::Powerset,
            Monad::Downset,
            Monad::Neighbourhood,
            Monad::Multiset(Arc::new(Semiring::f2())),
            Monad::Multiset(Arc::new(Semiring::boolean())),
            Monad::Distribution,
        ] {
            let one = letters(&["a"]);
            let shape = MooreShape {
                alphabet: one.clone(),
                outputs: Outputs::standard(&m).unwrap(),
            };
            let law = canonical_law(&m, shape, &exhaustive().with_max_den(2)).unwrap();
            assert!(law.certificate.ok(), "{}: {}", m.name(), law.certificate);
            let two = letters(&["a", "b"]);
            let law2 = DistributiveLaw {
                shape: MooreShape {
                    alphabet: two,
                    outputs: law.shape.outputs.clone(),
                },
                ..law.clone()
            };
            // Neighbourhoods of neighbourhoods cannot be sampled beyond |F X| = 2.
            let names: &[&str] = if matches!(m, Monad::Neighbourhood) { &["x0"] } else { &["x0", "x1"] };
            let x = Carrier::new(names.iter().copied()).unwrap();
            let x = if matches!(m, Monad::Downset) { x.with_leq(|a, b| a <= b) } else { x };
            let r = law2.check_laws(&x, &sampled).unwrap();
            assert!(r.ok(), "{}: {r}", m.name());
        }
    }

    #[test]
    fn powerset_law_exhaustive_on_two_states() {
        let law = powerset_law(&letters(&["a"]));
        let r = law.check_laws(&Carrier::new(["x0", "x1"]).unwrap(), &exhaustive()).unwrap();
        assert!(r.ok(), "{r}");
        assert_eq!(r.instances(LAW_MULT), 65536);
    }

    #[test]
    fn broken_output_algebra_breaks_the_law() {
        // A table that is a correct unit but sends {0,1} to 0.
        let two = Arc::new(Carrier::poset(["0", "1"], &[("0", "1")]).unwrap());
        let mut tab = BTreeMap::new();
        tab.insert(TVal::Set(vec![]), 0);
        tab.insert(TVal::Set(vec![0]), 0);
        tab.insert(TVal::Set(vec![1]), 1);
        tab.insert(TVal::Set(vec![0, 1]), 0);
        let alg = Arc::new(Algebra::unchecked(Monad::Powerset, two, Structure::Table(tab)));
        let shape = MooreShape {
            alphabet: letters(&["a"]),
            outputs: Outputs::Algebra(alg),
        };
        assert!(matches!(canonical_law(&Monad::Powerset, shape, &exhaustive()), Err(Error::LawFailed { .. })));
    }

    #[test]
    fn subset_construction() {
        let ft = small_nfa();
        let law = powerset_law(&ft.alphabet);
        let det = determinize(&ft, &law, DetMode::Full, &exhaustive()).unwrap();
        assert_eq!(det.algebra.len(), 4);
        assert!(det.certificate.ok());
        let c = &det.algebra.carrier;
        let p = c.index_of("{p}").unwrap();
        assert_eq!(c.name(det.coalgebra.trans[p][0]), "{p,q}");
        for w in words(1, 6) {
            let lang = bounded_language(&det.coalgebra, p, w.len());
            assert_eq!(lang[&w] == OutVal::Elem(1), nfa_accepts(&ft, 0, &w));
        }
    }

    #[test]
    fn determinised_language_matches_lifted_simulation() {
        let opts = exhaustive();
        let ft = small_nfa();
        let law = powerset_law(&ft.alphabet);
        let det = determinize(&ft, &law, DetMode::Reachable(vec![TVal::Set(vec![0])]), &opts).unwrap();
        assert!(det.partial);
        for n in 0..=6 {
            let start = det.algebra.free_position(&TVal::Set(vec![0])).unwrap();
            let lhs = bounded_language(&det.coalgebra, start, n);
            let rhs = lifted_language(&ft, &law.shape.outputs, &TVal::Set(vec![0]), n, &opts).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn deterministic_input_embeds_through_singletons() {
        let fc = ends_in_a();
        let ft = FTCoalgebra::new(
            Monad::Powerset,
            fc.carrier.clone(),
            fc.alphabet.clone(),
            fc.trans.iter().map(|r| r.iter().map(|&q| TVal::Set(vec![q])).collect()).collect(),
            fc.out.clone(),
        )
        .unwrap();
        let law = powerset_law(&fc.alphabet);
        let det = determinize(&ft, &law, DetMode::Full, &exhaustive()).unwrap();
        let emb: Vec<usize> = (0..2).map(|q| det.algebra.free_position(&TVal::Set(vec![q])).unwrap()).collect();
        for q in 0..2 {
            for a in 0..2 {
                assert_eq!(det.coalgebra.trans[emb[q]][a], emb[fc.trans[q][a]]);
            }
            assert_eq!(det.coalgebra.out[emb[q]], fc.out[q]);
        }
    }

    #[test]
    fn ends_in_a_language() {
        let fc = ends_in_a();
        assert_eq!(bounded_language(&fc, 0, 0).into_iter().collect::<Vec<_>>(), vec![(vec![], OutVal::Elem(0))]);
        let lang = bounded_language(&fc, 0, 2);
        assert_eq!(lang.len(), 7);
        for (w, o) in lang {
            assert_eq!(o == OutVal::Elem(1), w.last() == Some(&0));
        }
    }

    #[test]
    fn rabin_automaton_reachable_part() {
        let opts = exhaustive();
        let states = letters(&["u", "v"]);
        let half = rat(1, 2);
        let ft = FTCoalgebra::new(
            Monad::Distribution,
            states,
            letters(&["a"]),
            vec![vec![TVal::Dist(vec![(0, half.clone()), (1, half.clone())])], vec![TVal::Dist(vec![(1, rat(1, 1))])]],
            vec![OutVal::Rat(rat(0, 1)), OutVal::Rat(rat(1, 1))],
        )
        .unwrap();
        let shape = MooreShape {
            alphabet: ft.alphabet.clone(),
            outputs: Outputs::Expectation,
        };
        let law = Arc::new(canonical_law(&Monad::Distribution, shape, &opts.clone().with_max_den(2)).unwrap());
        // The reachable part is infinite: 1 - 2^-n. The ceiling stops it.
        let capped = opts.clone().with_max_enum(20);
        let start = TVal::Dist(vec![(0, rat(1, 1))]);
        assert!(matches!(
            determinize(&ft, &law, DetMode::Reachable(vec![start.clone()]), &capped),
            Err(Error::ExplosionGuard { .. })
        ));
        // Starting in v the closure is finite.
        let det = determinize(&ft, &law, DetMode::Reachable(vec![TVal::Dist(vec![(1, rat(1, 1))])]), &opts).unwrap();
        assert_eq!(det.algebra.len(), 1);
        // Acceptance probability after n letters from u is 1 - 2^-n.
        let lang = lifted_language(&ft, &Outputs::Expectation, &start, 5, &opts).unwrap();
        for (w, o) in lang {
            assert_eq!(o, OutVal::Rat(Rational::one() - rat(1, 1 << w.len())));
        }
    }

    #[test]
    fn corrupted_output_breaks_the_pentagon() {
        let ft = small_nfa();
        let law = powerset_law(&ft.alphabet);
        let mut det = determinize(&ft, &law, DetMode::Full, &exhaustive()).unwrap();
        let top = det.algebra.carrier.index_of("{p,q}").unwrap();
        det.coalgebra.out[top] = OutVal::Elem(0);
        let r = check_bialgebra(&det.algebra, &det.coalgebra, &law, false, &exhaustive()).unwrap();
        assert!(r.first_failure().unwrap().witness.is_some());
    }

    #[test]
    fn free_bialgebras_from_generators() {
        let opts = exhaustive();
        let ft = small_nfa();
        let law = powerset_law(&ft.alphabet);
        let det = determinize(&ft, &law, DetMode::Full, &opts).unwrap();
        let g = identity_generator(&det.algebra, &opts).unwrap();
        let fb = free_bialgebra_from_generator(&det, &g, &opts).unwrap();
        assert!(fb.report.ok(), "{}", fb.report);
        // For the identity generator i♯ is h.
        for p in 0..fb.bialgebra.algebra.len() {
            assert_eq!(fb.i_sharp.map[p], det.algebra.apply(fb.bialgebra.algebra.free_value(p).unwrap()).unwrap());
        }
        let basis = canonical_free_basis(&Monad::Powerset, &ft.carrier, &opts).unwrap();
        let fb = free_bialgebra_from_generator(&det, &basis, &opts).unwrap();
        assert!(fb.d.is_some());
        assert!(fb.report.ok(), "{}", fb.report);
        assert!(fb.report.get("d∘i♯ = id_TY").unwrap().holds());
    }

    #[test]
    fn bialgebra_basis_from_deterministic_input() {
        let opts = exhaustive();
        let fc = ends_in_a();
        let ft = FTCoalgebra::new(
            Monad::Powerset,
            fc.carrier.clone(),
            fc.alphabet.clone(),
            fc.trans.iter().map(|r| r.iter().map(|&q| TVal::Set(vec![q])).collect()).collect(),
            fc.out.clone(),
        )
        .unwrap();
        let law = powerset_law(&fc.alphabet);
        let det = determinize(&ft, &law, DetMode::Full, &opts).unwrap();
        let basis = canonical_free_basis(&Monad::Powerset, &fc.carrier, &opts).unwrap();
        let cand = BialgebraCandidate {
            y: fc.carrier.clone(),
            k_y: fc.clone(),
            i: basis.i.clone(),
            d: basis.d.clone(),
        };
        let r = bialgebra_basis_check(&det, &cand, &opts).unwrap();
        assert!(r.ok(), "{r}");
        assert!(r.get(SAME_STRUCTURE).unwrap().holds());
        // Swapping the coalgebra on Y breaks the leftmost diagram.
        let mut bad = cand.clone();
        bad.k_y.trans = vec![vec![0, 1], vec![0, 1]];
        let r = bialgebra_basis_check(&det, &bad, &opts).unwrap();
        assert_eq!(r.first_failure().unwrap().law, GEN_COALGEBRA);
    }

    #[test]
    fn generator_from_algebra_basis() {
        let opts = exhaustive();
        let ft = small_nfa();
        let law = powerset_law(&ft.alphabet);
        let det = determinize(&ft, &law, DetMode::Full, &opts).unwrap();
        let basis = canonical_free_basis(&Monad::Powerset, &ft.carrier, &opts).unwrap();
        let (cand, r) = bialgebra_generator_from_basis(&det, &basis, &opts).unwrap();
        assert_eq!(cand.y.len(), 4);
        assert!(r.ok(), "{r}");
    }

    #[test]
    fn generator_morphism_lifts() {
        let opts = exhaustive();
        let ft = small_nfa();
        let law = powerset_law(&ft.alphabet);
        let det = determinize(&ft, &law, DetMode::Full, &opts).unwrap();
        let basis = canonical_free_basis(&Monad::Powerset, &ft.carrier, &opts).unwrap();
        let (tf, r) = generator_morphism_lift(&basis, &basis, &[0, 1], &det, &opts).unwrap();
        assert!(r.ok(), "{r}");
        assert_eq!(tf.map, (0..4).collect::<Vec<_>>());
        // A renamed copy of the basis: Y' = {q', p'} with i'(q') = {q}.
        let y2 = letters(&["q'", "p'"]);
        let renamed = GeneratorTriple::new(
            basis.algebra.clone(),
            y2,
            vec![basis.i[1], basis.i[0]],
            basis
                .d
                .iter()
                .map(|t| Monad::Powerset.map(t, &|v: &usize| Ok(1 - *v), &*basis.y, &*basis.y).unwrap())
                .collect(),
        )
        .unwrap();
        let (renamed, _) = crate::generator::certify(renamed, &opts).unwrap();
        let (tf, r) = generator_morphism_lift(&basis, &renamed, &[1, 0], &det, &opts).unwrap();
        assert!(r.ok(), "{r}");
        assert!(tf.is_bijective());
    }

    #[test]
    fn dot_export() {
        let ft = small_nfa();
        let outputs = Outputs::standard(&Monad::Powerset).unwrap();
        let dot = ftcoalgebra_dot(&ft, &outputs);
        assert!(dot.contains("s0 -> s1 [label=\"a\"]"));
        let dot = fcoalgebra_dot(&ends_in_a(), &outputs);
        assert!(dot.contains("s1 [label=\"f / 1\"]"));
    }
}
