//! Generators `(Y, i, d)` with `i♯ ∘ d = id_X`, and bases, which additionally
//! satisfy `d ∘ i♯ = id_{TY}`.

use crate::algebra::{certify_hom, check_hom, free_algebra, glb, induced_view, Algebra, AlgebraHom, AlgebraRef, InducedView};
use crate::error::{Error, Result};
use crate::finite::{all_tables, Carrier, CarrierRef, FiniteFunction};
use crate::laws::{mode_label, t_domain};
use crate::monad::{all_subsets, Monad};
use crate::report::{Mode, Opts, Report};
use crate::tvalue::{TVal, TValue};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// What has been certified about a triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Unchecked,
    Generator,
    Basis,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Unchecked => "unchecked",
            Status::Generator => "generator",
            Status::Basis => "basis",
        })
    }
}

/// A candidate generator `(Y, i, d)` for an algebra `(X, h)`.
#[derive(Clone)]
pub struct GeneratorTriple {
    pub algebra: AlgebraRef,
    pub y: CarrierRef,
    /// `i : Y → X`.
    pub i: Vec<usize>,
    /// `d : X → T Y`.
    pub d: Vec<TValue>,
    pub status: Status,
    /// Checking mode behind `status`.
    pub mode: String,
}

impl fmt::Debug for GeneratorTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = &self.algebra.carrier;
        let i: Vec<String> = self.i.iter().enumerate().map(|(y, &v)| format!("{}↦{}", self.y.name(y), x.name(v))).collect();
        let d: Vec<String> = self
            .d
            .iter()
            .enumerate()
            .map(|(v, t)| format!("{}↦{}", x.name(v), self.render_ty(t)))
            .collect();
        write!(f, "Triple[{}] i: {} | d: {}", self.status, i.join(", "), d.join(", "))
    }
}

/// Tables equal up to status and mode.
impl PartialEq for GeneratorTriple {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.y == other.y && self.i == other.i && self.d == other.d
    }
}

impl GeneratorTriple {
    /// Builds an unchecked triple, validating shapes.
    pub fn new(algebra: AlgebraRef, y: CarrierRef, i: Vec<usize>, d: Vec<TValue>) -> Result<Self> {
        let x = &algebra.carrier;
        if i.len() != y.len() || i.iter().any(|&v| v >= x.len()) {
            return Err(Error::CarrierMismatch("i does not map Y into X".into()));
        }
        if d.len() != x.len() {
            return Err(Error::CarrierMismatch("d is not total on X".into()));
        }
        for t in &d {
            algebra.monad.validate(&*y, t)?;
        }
        if matches!(algebra.monad, Monad::Downset) {
            let i_fn = FiniteFunction::new(y.clone(), x.clone(), i.clone())?;
            if !i_fn.is_monotone() {
                return Err(Error::Invalid("i is not monotone".into()));
            }
        }
        Ok(GeneratorTriple {
            algebra,
            y,
            i,
            d,
            status: Status::Unchecked,
            mode: String::new(),
        })
    }

    pub fn monad(&self) -> &Monad {
        &self.algebra.monad
    }

    pub fn render_ty(&self, t: &TValue) -> String {
        self.algebra.monad.render(&*self.y, t)
    }

    pub fn i_function(&self) -> FiniteFunction {
        FiniteFunction {
            domain: self.y.clone(),
            codomain: self.algebra.carrier.clone(),
            table: self.i.clone(),
        }
    }

    /// `T i : T Y → T X`.
    pub fn t_i(&self, t: &TValue) -> Result<TValue> {
        self.monad().map(t, &|y: &usize| Ok(self.i[*y]), &*self.y, &*self.algebra.carrier)
    }

    /// `i♯ = h ∘ T i`.
    pub fn i_sharp(&self, t: &TValue) -> Result<usize> {
        self.algebra.apply(&self.t_i(t)?)
    }

    fn x_name(&self, x: usize) -> &str {
        self.algebra.carrier.name(x)
    }
}

pub const GENERATOR_LAW: &str = "generator: i♯∘d = id_X";

/// Checks `i♯ ∘ d = id_X` pointwise.
pub fn check_generator(g: &GeneratorTriple) -> Result<Report> {
    let mut witness = None;
    for x in g.algebra.carrier.elements() {
        let back = g.i_sharp(&g.d[x])?;
        if back != x {
            witness = Some(format!(
                "{} (i♯(d({})) = i♯({}) = {})",
                g.x_name(x),
                g.x_name(x),
                g.render_ty(&g.d[x]),
                g.x_name(back)
            ));
            break;
        }
    }
    let mut r = Report::new();
    r.push(GENERATOR_LAW, "exhaustive", g.algebra.len() as u64, witness);
    Ok(r)
}

/// Checks the generator law, then `d ∘ i♯ = id_{TY}` on `T Y`. A failure of the
/// latter is reported as a collision: two distinct elements of `T Y` with the
/// same image under `i♯`. When both hold, the two derived identities
/// `d∘h = μ_Y∘Td` and `d∘i = η_Y` are checked as well.
pub fn check_basis(g: &GeneratorTriple, opts: &Opts) -> Result<Report> {
    let mut r = check_generator(g)?;
    if !r.ok() {
        return Ok(r);
    }
    let m = g.monad();
    let ty = t_domain(m, &*g.y, opts, 21)?;
    let mut witness = None;
    for t in &ty {
        let x = g.i_sharp(t)?;
        if &g.d[x] != t {
            witness = Some(format!(
                "collision in TY: i♯({}) = i♯({}) = {}",
                g.render_ty(t),
                g.render_ty(&g.d[x]),
                g.x_name(x)
            ));
            break;
        }
    }
    let label = mode_label(m, opts);
    r.push("basis: d∘i♯ = id_TY", label, ty.len() as u64, witness);
    if r.ok() {
        r.extend(check_derived(g, opts)?);
    }
    Ok(r)
}

/// `d ∘ h = μ_Y ∘ T d` on `T X` and `d ∘ i = η_Y` on `Y`.
pub fn check_derived(g: &GeneratorTriple, opts: &Opts) -> Result<Report> {
    let m = g.monad();
    let x = &*g.algebra.carrier;
    let mut r = Report::new();
    let tx = t_domain(m, x, opts, 23)?;
    let t1 = crate::monad::TSpace::new(m, &*g.y, opts);
    let mut witness = None;
    for t in &tx {
        let lhs = &g.d[g.algebra.apply(t)?];
        let td = m.map(t, &|v: &usize| Ok(g.d[*v].clone()), x, &t1)?;
        if lhs != &m.mult(&*g.y, &td)? {
            witness = Some(g.algebra.render(t));
            break;
        }
    }
    r.push("derived: d∘h = μ_Y∘Td", mode_label(m, opts), tx.len() as u64, witness);
    let mut witness = None;
    for y in g.y.elements() {
        if g.d[g.i[y]] != m.unit(&*g.y, &y)? {
            witness = Some(g.y.name(y).to_string());
            break;
        }
    }
    r.push("derived: d∘i = η_Y", "exhaustive", g.y.len() as u64, witness);
    let mut seen = std::collections::HashMap::new();
    let mut witness = None;
    for v in x.elements() {
        let k = g.t_i(&g.d[v])?;
        if g.algebra.apply(&k)? != v {
            witness = Some(format!("h(Ti(d({0}))) ≠ {0}", x.name(v)));
        } else if let Some(w) = seen.insert(k, v) {
            witness = Some(format!("Ti∘d identifies {} and {}", x.name(w), x.name(v)));
        }
        if witness.is_some() {
            break;
        }
    }
    r.push("derived: Ti∘d injective with left inverse h", "exhaustive", x.len() as u64, witness);
    Ok(r)
}

/// Runs [`check_basis`] and records the strongest status reached.
pub fn certify(mut g: GeneratorTriple, opts: &Opts) -> Result<(GeneratorTriple, Report)> {
    let r = check_basis(&g, opts)?;
    g.status = if r.ok() {
        Status::Basis
    } else if r.get(GENERATOR_LAW).is_some_and(|c| c.holds()) {
        Status::Generator
    } else {
        Status::Unchecked
    };
    g.mode = mode_label(g.monad(), opts);
    Ok((g, r))
}

/// The basis `(X, η_X, id_{TX})` of the free algebra `(T X, μ_X)`.
pub fn canonical_free_basis(monad: &Monad, x: &CarrierRef, opts: &Opts) -> Result<GeneratorTriple> {
    let free = Arc::new(free_algebra(monad, x, opts)?);
    let i = x
        .elements()
        .map(|e| free.free_position(&monad.unit(&**x, &e)?))
        .collect::<Result<Vec<_>>>()?;
    let d = (0..free.len()).map(|p| free.free_value(p).cloned().unwrap()).collect();
    let g = GeneratorTriple::new(free, x.clone(), i, d)?;
    let (g, r) = certify(g, opts)?;
    if g.status != Status::Basis {
        return Err(failure(&r));
    }
    Ok(g)
}

fn failure(r: &Report) -> Error {
    match r.first_failure() {
        Some(c) => Error::LawFailed {
            law: c.law.clone(),
            witness: c.witness.clone().unwrap_or_default(),
        },
        None => Error::Invalid("certification failed".into()),
    }
}

/// Given `i : Y → X` and `d : X → T Y` with `μ_X∘T²i∘Td = id_{TX}` and
/// `μ_Y∘Td∘Ti = id_{TY}`, returns the basis `(Y, η_X∘i, μ_Y∘Td)` of the free
/// algebra `(T X, μ_X)`.
pub fn free_basis_from_pair(
    monad: &Monad,
    x: &CarrierRef,
    y: &CarrierRef,
    i: &[usize],
    d: &[TValue],
    opts: &Opts,
) -> Result<GeneratorTriple> {
    let m = monad;
    let tsp_y = crate::monad::TSpace::new(m, &**y, opts);
    let tsp_x = crate::monad::TSpace::new(m, &**x, opts);
    let d_of = |v: &usize| -> Result<TValue> { d.get(*v).cloned().ok_or_else(|| Error::CarrierMismatch("d is not total".into())) };
    let ti = |t: &TValue| m.map(t, &|v: &usize| Ok(i[*v]), &**y, &**x);
    // μ_Y ∘ T d : T X → T Y
    let mu_td = |t: &TValue| -> Result<TValue> { m.mult(&**y, &m.map(t, &d_of, &**x, &tsp_y)?) };
    // First square: μ_X ∘ T²i ∘ Td = id on T X.
    for t in m.enumerate(&**x, opts)? {
        let td = m.map(&t, &d_of, &**x, &tsp_y)?;
        let t2i = m.map(&td, &ti, &tsp_y, &tsp_x)?;
        if m.mult(&**x, &t2i)? != t {
            return Err(Error::HypothesisFailed {
                law: "μ_X∘T²i∘Td = id_TX".into(),
                witness: m.render(&**x, &t),
            });
        }
    }
    // Second square: μ_Y ∘ Td ∘ Ti = id on T Y.
    for t in m.enumerate(&**y, opts)? {
        if mu_td(&ti(&t)?)? != t {
            return Err(Error::HypothesisFailed {
                law: "μ_Y∘Td∘Ti = id_TY".into(),
                witness: m.render(&**y, &t),
            });
        }
    }
    let free = Arc::new(free_algebra(m, x, opts)?);
    let new_i = i
        .iter()
        .map(|&v| free.free_position(&m.unit(&**x, &v)?))
        .collect::<Result<Vec<_>>>()?;
    let new_d = (0..free.len())
        .map(|p| mu_td(free.free_value(p).unwrap()))
        .collect::<Result<Vec<_>>>()?;
    let g = GeneratorTriple::new(free, y.clone(), new_i, new_d)?;
    let (g, r) = certify(g, opts)?;
    if g.status != Status::Basis {
        return Err(failure(&r));
    }
    Ok(g)
}

/// `f♯ = h_Z ∘ T f ∘ d : (X, h_X) → (Z, h_Z)`, the unique homomorphism with
/// `f♯ ∘ i = f`. Both properties are checked.
pub fn extend_along_basis(basis: &GeneratorTriple, f: &FiniteFunction, target: &AlgebraRef, opts: &Opts) -> Result<AlgebraHom> {
    if *f.domain != *basis.y || *f.codomain != *target.carrier {
        return Err(Error::CarrierMismatch("f must map Y into the target carrier".into()));
    }
    let m = basis.monad();
    let map = basis
        .d
        .iter()
        .map(|t| target.apply(&m.map(t, &|y: &usize| Ok(f.apply(*y)), &*basis.y, &*target.carrier)?))
        .collect::<Result<Vec<_>>>()?;
    let mut hom = certify_hom(basis.algebra.clone(), target.clone(), map, opts)?;
    let bad = basis.y.elements().find(|&y| hom.map[basis.i[y]] != f.apply(y));
    hom.certificate.push(
        "extension: f♯∘i = f",
        "exhaustive",
        basis.y.len() as u64,
        bad.map(|y| basis.y.name(y).to_string()),
    );
    if let Some(y) = bad {
        return Err(Error::LawFailed {
            law: "extension: f♯∘i = f".into(),
            witness: basis.y.name(y).to_string(),
        });
    }
    Ok(hom)
}

/// Every homomorphism `X → Z`, by brute force over all functions.
pub fn all_homs(source: &Algebra, target: &Algebra, opts: &Opts) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for table in all_tables(source.len(), target.len()) {
        if check_hom(source, target, &table, opts)?.ok() {
            out.push(table);
        }
    }
    Ok(out)
}

/// The isomorphism `i♯ : (T Y, μ_Y) → (X, h)` of a basis, with inverse `d`.
#[derive(Clone, Debug)]
pub struct BasisIso {
    pub y: CarrierRef,
    pub forward: AlgebraHom,
    pub inverse: AlgebraHom,
}

/// Converts a basis into the isomorphism `i♯` from the free algebra on `Y`.
pub fn basis_to_iso(basis: &GeneratorTriple, opts: &Opts) -> Result<BasisIso> {
    let free = Arc::new(free_algebra(basis.monad(), &basis.y, opts)?);
    let fwd = (0..free.len())
        .map(|p| basis.i_sharp(free.free_value(p).unwrap()))
        .collect::<Result<Vec<_>>>()?;
    let inv = basis.d.iter().map(|t| free.free_position(t)).collect::<Result<Vec<_>>>()?;
    let forward = certify_hom(free.clone(), basis.algebra.clone(), fwd, opts)?;
    let inverse = certify_hom(basis.algebra.clone(), free, inv, opts)?;
    let round_x = (0..basis.algebra.len()).all(|x| forward.map[inverse.map[x]] == x);
    let round_t = (0..forward.source.len()).all(|p| inverse.map[forward.map[p]] == p);
    if !round_x || !round_t {
        return Err(Error::NotIso("i♯ and d are not mutually inverse".into()));
    }
    Ok(BasisIso {
        y: basis.y.clone(),
        forward,
        inverse,
    })
}

/// Converts an isomorphism `φ : (T Y, μ_Y) → (X, h)` into the basis
/// `(Y, φ∘η_Y, φ⁻¹)`.
pub fn iso_to_basis(y: &CarrierRef, phi: &AlgebraHom, opts: &Opts) -> Result<GeneratorTriple> {
    let free = &phi.source;
    if free.free_base().map(|b| **b != **y).unwrap_or(true) {
        return Err(Error::NotIso("source of φ is not the free algebra on Y".into()));
    }
    if !phi.is_bijective() {
        return Err(Error::NotIso("φ is not bijective".into()));
    }
    let r = check_hom(free, &phi.target, &phi.map, opts)?;
    if !r.ok() {
        return Err(Error::NotIso(format!("φ is not a homomorphism: {}", r.first_failure().unwrap().witness.clone().unwrap_or_default())));
    }
    let m = &free.monad;
    let i = y
        .elements()
        .map(|e| Ok(phi.map[free.free_position(&m.unit(&**y, &e)?)?]))
        .collect::<Result<Vec<_>>>()?;
    let mut inv = vec![0; phi.target.len()];
    for (p, &x) in phi.map.iter().enumerate() {
        inv[x] = p;
    }
    let d = inv.iter().map(|&p| free.free_value(p).cloned().unwrap()).collect();
    let g = GeneratorTriple::new(phi.target.clone(), y.clone(), i, d)?;
    let (g, rep) = certify(g, opts)?;
    if g.status != Status::Basis {
        return Err(Error::NotIso(failure(&rep).to_string()));
    }
    Ok(g)
}

/// Exact size of `T Y` for `|Y| = k`, or `None` if infinite.
fn exact_ty_size(m: &Monad, y: &Carrier, opts: &Opts) -> Option<u128> {
    let k = y.len();
    match m {
        Monad::Distribution => (k <= 1).then_some(k as u128),
        Monad::List { .. } => (k == 0).then_some(1),
        Monad::Downset => m.enumerate(y, opts).ok().map(|v| v.len() as u128),
        _ => m.count(k, opts),
    }
}

/// All bases with `|Y| ≤ max_y`, with `Y = {y0, y1, …}`. Bases that differ
/// only by renaming `Y` are identified by fixing these names; distinct
/// `(i, d)` tables are distinct results. For the downset monad `Y` carries
/// the order pulled back along `i`, since `i` of a basis is an order embedding.
pub fn search_basis(alg: &AlgebraRef, max_y: usize, opts: &Opts) -> Result<Vec<GeneratorTriple>> {
    let m = &alg.monad;
    let n = alg.len();
    let mut out = Vec::new();
    for k in 0..=max_y {
        let names: Vec<String> = (0..k).map(|j| format!("y{j}")).collect();
        let discrete = Carrier::new(names.clone())?;
        if !matches!(m, Monad::Downset) && exact_ty_size(m, &discrete, opts) != Some(n as u128) {
            continue;
        }
        for i in all_tables(k, n) {
            let y = if matches!(m, Monad::Downset) {
                let mut seen = i.clone();
                seen.sort();
                seen.dedup();
                if seen.len() != k {
                    continue;
                }
                Carrier::new(names.clone())?.with_leq(|a, b| alg.carrier.leq(i[a], i[b]))
            } else {
                discrete.clone()
            };
            if exact_ty_size(m, &y, opts) != Some(n as u128) {
                continue;
            }
            let y = Arc::new(y);
            let ty = m.enumerate(&*y, opts)?;
            let mut d: Vec<Option<TValue>> = vec![None; n];
            let mut ok = true;
            for t in ty {
                let x = alg.apply(&m.map(&t, &|v: &usize| Ok(i[*v]), &*y, &*alg.carrier)?)?;
                if d[x].replace(t).is_some() {
                    ok = false;
                    break;
                }
            }
            if !ok || d.iter().any(Option::is_none) {
                continue;
            }
            let g = GeneratorTriple::new(alg.clone(), y, i, d.into_iter().map(Option::unwrap).collect())?;
            let (g, _) = certify(g, opts)?;
            if g.status == Status::Basis {
                out.push(g);
            }
        }
    }
    Ok(out)
}

/// The order induced by a powerset or downset algebra: `x ≤ y iff x ∨ y = y`.
fn induced_leq(alg: &Algebra, opts: &Opts) -> Result<Vec<Vec<bool>>> {
    let n = alg.len();
    match induced_view(alg, opts)? {
        InducedView::Lattice { leq, .. } => {
            let mut mat = vec![vec![false; n]; n];
            for (a, b) in leq {
                mat[a][b] = true;
            }
            Ok(mat)
        }
        _ => Err(Error::NotApplicable("expected a lattice-valued algebra".into())),
    }
}

/// Join-irreducible elements: not the bottom, and not the join of everything
/// strictly below.
fn join_irreducibles(alg: &Algebra, leq: &[Vec<bool>]) -> Result<Vec<usize>> {
    let n = alg.len();
    let join = |xs: Vec<usize>| -> Result<usize> {
        let t = if matches!(alg.monad, Monad::Downset) {
            TVal::Set(alg.carrier.downclose(&xs))
        } else {
            TVal::Set(xs)
        };
        alg.apply(&t)
    };
    let bottom = join(vec![])?;
    let mut out = Vec::new();
    for x in 0..n {
        if x == bottom {
            continue;
        }
        let below: Vec<usize> = (0..n).filter(|&y| y != x && leq[y][x]).collect();
        if join(below)? != x {
            out.push(x);
        }
    }
    Ok(out)
}

/// `(J(L), i, d)` for a powerset algebra `L`, with `J(L)` the join-irreducibles,
/// `i` the inclusion and `d(x) = {a ∈ J(L) | a ≤ x}`. The result is certified
/// as a generator and its basis status is reported in the returned report.
pub fn join_irreducible_generator(alg: &AlgebraRef, opts: &Opts) -> Result<(GeneratorTriple, Report)> {
    if !matches!(alg.monad, Monad::Powerset) {
        return Err(Error::NotApplicable("join-irreducible generators need a powerset algebra".into()));
    }
    let leq = induced_leq(alg, opts)?;
    let j = join_irreducibles(alg, &leq)?;
    let y = Arc::new(Carrier::new(j.iter().map(|&x| alg.carrier.name(x).to_string()))?);
    let d = alg
        .carrier
        .elements()
        .map(|x| TVal::Set((0..j.len()).filter(|&k| leq[j[k]][x]).collect()))
        .collect();
    let g = GeneratorTriple::new(alg.clone(), y, j, d)?;
    let (g, r) = certify(g, opts)?;
    if g.status == Status::Unchecked {
        let c = r.first_failure().unwrap();
        return Err(Error::NotGenerated(c.witness.clone().unwrap_or_default()));
    }
    Ok((g, r))
}

/// First triple violating distributivity `x∧(y∨z) = (x∧y)∨(x∧z)`.
pub fn distributivity_witness(alg: &Algebra, opts: &Opts) -> Result<Option<(usize, usize, usize)>> {
    let n = alg.len();
    let leq = induced_leq(alg, opts)?;
    let ordered = Carrier::new(alg.carrier.names().to_vec())?.with_leq(|a, b| leq[a][b]);
    let join = |a: usize, b: usize| crate::algebra::lub(&ordered, &[a, b]);
    let meet = |a: usize, b: usize| glb(&ordered, &[a, b]);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = join(y, z).and_then(|yz| meet(x, yz));
                let rhs = match (meet(x, y), meet(x, z)) {
                    (Some(a), Some(b)) => join(a, b),
                    _ => None,
                };
                if lhs.is_none() || lhs != rhs {
                    return Ok(Some((x, y, z)));
                }
            }
        }
    }
    Ok(None)
}

/// The Birkhoff basis of a downset algebra on a finite distributive lattice:
/// `Y` the join-irreducibles with the restricted order, `i` the inclusion,
/// `d(x)` the irreducibles below `x`.
pub fn birkhoff_basis(alg: &AlgebraRef, opts: &Opts) -> Result<GeneratorTriple> {
    if !matches!(alg.monad, Monad::Downset) {
        return Err(Error::NotApplicable("the Birkhoff basis needs a downset algebra".into()));
    }
    if let Some((a, b, c)) = distributivity_witness(alg, opts)? {
        let nm = |v: usize| alg.carrier.name(v).to_string();
        return Err(Error::NotDistributive(format!("({}, {}, {})", nm(a), nm(b), nm(c))));
    }
    let leq = induced_leq(alg, opts)?;
    let j = join_irreducibles(alg, &leq)?;
    let y = Arc::new(Carrier::new(j.iter().map(|&x| alg.carrier.name(x).to_string()))?.with_leq(|a, b| leq[j[a]][j[b]]));
    let d = alg
        .carrier
        .elements()
        .map(|x| TVal::Set((0..j.len()).filter(|&k| leq[j[k]][x]).collect()))
        .collect();
    let g = GeneratorTriple::new(alg.clone(), y, j, d)?;
    let (g, r) = certify(g, opts)?;
    if g.status != Status::Basis {
        return Err(failure(&r));
    }
    Ok(g)
}

/// For a neighbourhood algebra: `Y` the atoms of the induced Boolean algebra,
/// `i` the inclusion and `d(x) = {A ⊆ Y | minterm(A) ≤ x}`. Besides the
/// generic checks, the report contains the minterm identity
/// `x = ⋁_{A ∈ d(x)} minterm(A)` for every `x`.
pub fn atoms_generator(alg: &AlgebraRef, opts: &Opts) -> Result<(GeneratorTriple, Report)> {
    if !matches!(alg.monad, Monad::Neighbourhood) {
        return Err(Error::NotApplicable("atoms generators need a neighbourhood algebra".into()));
    }
    let InducedView::Boolean {
        zero,
        one,
        neg,
        join,
        meet,
        atoms,
    } = induced_view(alg, opts)?
    else {
        unreachable!()
    };
    let k = atoms.len();
    let subsets = {
        let mut s = all_subsets(&(0..k).collect::<Vec<_>>());
        s.sort();
        s
    };
    let minterm = |a: &Vec<usize>| -> usize {
        (0..k).fold(one, |acc, y| {
            let lit = if a.binary_search(&y).is_ok() { atoms[y] } else { neg[atoms[y]] };
            meet[acc][lit]
        })
    };
    let terms: Vec<usize> = subsets.iter().map(minterm).collect();
    let leq = |a: usize, b: usize| meet[a][b] == a;
    let y = Arc::new(Carrier::new(atoms.iter().map(|&x| alg.carrier.name(x).to_string()))?);
    let d: Vec<TValue> = alg
        .carrier
        .elements()
        .map(|x| TVal::Nbhd(subsets.iter().zip(&terms).filter(|(_, &t)| leq(t, x)).map(|(s, _)| s.clone()).collect()))
        .collect();
    let mut lemma_fail = None;
    for x in alg.carrier.elements() {
        let TVal::Nbhd(fam) = &d[x] else { unreachable!() };
        let j = fam.iter().fold(zero, |acc, s| join[acc][terms[subsets.binary_search(s).unwrap()]]);
        if j != x {
            lemma_fail = Some(alg.carrier.name(x).to_string());
            break;
        }
    }
    let g = GeneratorTriple::new(alg.clone(), y, atoms, d)?;
    let (g, mut r) = certify(g, opts)?;
    r.push("minterm identity: x = ⋁ minterm(A), A ∈ d(x)", "exhaustive", alg.len() as u64, lemma_fail);
    Ok((g, r))
}

/// `d_β ∘ (i_α)♯ : (T Y_α, μ) → (T Y_β, μ)` with its inverse `d_α ∘ (i_β)♯`.
pub fn basis_uniqueness_iso(a: &GeneratorTriple, b: &GeneratorTriple, opts: &Opts) -> Result<(AlgebraHom, AlgebraHom)> {
    if a.algebra != b.algebra {
        return Err(Error::CarrierMismatch("bases of different algebras".into()));
    }
    let fa = Arc::new(free_algebra(a.monad(), &a.y, opts)?);
    let fb = Arc::new(free_algebra(b.monad(), &b.y, opts)?);
    let fwd = (0..fa.len())
        .map(|p| fb.free_position(&b.d[a.i_sharp(fa.free_value(p).unwrap())?]))
        .collect::<Result<Vec<_>>>()?;
    let inv = (0..fb.len())
        .map(|p| fa.free_position(&a.d[b.i_sharp(fb.free_value(p).unwrap())?]))
        .collect::<Result<Vec<_>>>()?;
    let f = certify_hom(fa.clone(), fb.clone(), fwd, opts)?;
    let g = certify_hom(fb, fa, inv, opts)?;
    if (0..f.map.len()).any(|p| g.map[f.map[p]] != p) || (0..g.map.len()).any(|p| f.map[g.map[p]] != p) {
        return Err(Error::NotIso("the comparison maps are not mutually inverse".into()));
    }
    Ok((f, g))
}

/// Checks that `f : Y_α → Y_β` is a morphism of generators:
/// `i_β ∘ f = i_α` and `T f ∘ d_α = d_β`.
pub fn check_generator_morphism(alpha: &GeneratorTriple, beta: &GeneratorTriple, f: &[usize]) -> Result<Report> {
    if alpha.algebra != beta.algebra || f.len() != alpha.y.len() || f.iter().any(|&v| v >= beta.y.len()) {
        return Err(Error::CarrierMismatch("f does not map Y_α into Y_β over one algebra".into()));
    }
    let m = alpha.monad();
    let mut r = Report::new();
    let bad = alpha.y.elements().find(|&y| beta.i[f[y]] != alpha.i[y]);
    r.push("morphism: i_β∘f = i_α", "exhaustive", alpha.y.len() as u64, bad.map(|y| alpha.y.name(y).to_string()));
    let mut bad = None;
    for x in alpha.algebra.carrier.elements() {
        if m.map(&alpha.d[x], &|y: &usize| Ok(f[*y]), &*alpha.y, &*beta.y)? != beta.d[x] {
            bad = Some(alpha.algebra.carrier.name(x).to_string());
            break;
        }
    }
    r.push("morphism: Tf∘d_α = d_β", "exhaustive", alpha.algebra.len() as u64, bad);
    Ok(r)
}

/// The trivial generator `(X, id_X, η_X)` of any algebra.
pub fn identity_generator(alg: &AlgebraRef, opts: &Opts) -> Result<GeneratorTriple> {
    let x = alg.carrier.clone();
    let d = x.elements().map(|e| alg.monad.unit(&*x, &e)).collect::<Result<Vec<_>>>()?;
    let g = GeneratorTriple::new(alg.clone(), x.clone(), x.elements().collect(), d)?;
    Ok(certify(g, opts)?.0)
}

/// Mode recorded for exhaustive certification.
pub fn exhaustive() -> Opts {
    Opts::default().with_mode(Mode::Exhaustive)
}

/// Renders `d` as a name-keyed map, for reports.
pub fn d_table(g: &GeneratorTriple) -> BTreeMap<String, String> {
    g.algebra
        .carrier
        .elements()
        .map(|x| (g.algebra.carrier.name(x).to_string(), g.render_ty(&g.d[x])))
        .collect()
}
