//! Bases presented as `T`-coalgebras `k : X → T X` on an algebra `(X, h)`.
//!
//! A coalgebra qualifies when `k∘h = μ_X∘Tk` (left), `h∘k = id_X` (middle)
//! and `Tk∘k = Tη_X∘k` (right). A basis `(Y, i, d)` gives `k = Ti∘d`; in the
//! other direction `Y` is recovered as the equaliser of `k` and `η_X`.

use crate::algebra::AlgebraRef;
use crate::error::{Error, Result};
use crate::finite::Carrier;
use crate::generator::{certify, GeneratorTriple, Status};
use crate::laws::{mode_label, t_domain};
use crate::monad::TSpace;
use crate::report::{Opts, Report};
use crate::tvalue::TValue;
use std::collections::HashMap;
use std::sync::Arc;

/// `k : X → T X` on the carrier of an algebra.
#[derive(Clone, Debug)]
pub struct TCoalgebra {
    pub algebra: AlgebraRef,
    pub k: Vec<TValue>,
}

pub const LEFT: &str = "left: k∘h = μ_X∘Tk";
pub const MIDDLE: &str = "middle: h∘k = id_X";
pub const RIGHT: &str = "right: Tk∘k = Tη_X∘k";

/// Checks the three diagrams.
pub fn check_coalgebra_basis(c: &TCoalgebra, opts: &Opts) -> Result<Report> {
    let alg = &c.algebra;
    let m = &alg.monad;
    let x = &*alg.carrier;
    if c.k.len() != x.len() {
        return Err(Error::CarrierMismatch("k is not total on X".into()));
    }
    for t in &c.k {
        m.validate(x, t)?;
    }
    let tx = TSpace::new(m, x, opts);
    let k_of = |v: &usize| Ok(c.k[*v].clone());
    let name = |v: usize| x.name(v).to_string();
    let mut r = Report::new();

    let bad = x.elements().find(|&v| alg.apply(&c.k[v]).map(|w| w != v).unwrap_or(true));
    r.push(MIDDLE, "exhaustive", x.len() as u64, bad.map(name));

    let dom = t_domain(m, x, opts, 31)?;
    let mut bad = None;
    for t in &dom {
        let lhs = &c.k[alg.apply(t)?];
        let rhs = m.mult(x, &m.map(t, &k_of, x, &tx)?)?;
        if *lhs != rhs {
            bad = Some(alg.render(t));
            break;
        }
    }
    r.push(LEFT, mode_label(m, opts), dom.len() as u64, bad);

    let mut bad = None;
    for v in x.elements() {
        let lhs = m.map(&c.k[v], &k_of, x, &tx)?;
        let rhs = m.map(&c.k[v], &|w: &usize| m.unit(x, w), x, &tx)?;
        if lhs != rhs {
            bad = Some(name(v));
            break;
        }
    }
    r.push(RIGHT, "exhaustive", x.len() as u64, bad);
    Ok(r)
}

fn diagram_error(r: &Report) -> Option<Error> {
    [MIDDLE, LEFT, RIGHT].iter().find_map(|law| {
        let c = r.get(law)?;
        (!c.holds()).then(|| Error::DiagramFailed {
            diagram: law.split(':').next().unwrap().to_string(),
            witness: c.witness.clone().unwrap_or_default(),
        })
    })
}

/// `k = Ti∘d` for a basis, with the three diagrams and `(Ti∘d)∘i = η_X∘i`
/// certified.
pub fn jacobs_coalgebra(basis: &GeneratorTriple, opts: &Opts) -> Result<(TCoalgebra, Report)> {
    let k = basis.d.iter().map(|t| basis.t_i(t)).collect::<Result<Vec<_>>>()?;
    let c = TCoalgebra {
        algebra: basis.algebra.clone(),
        k,
    };
    let mut r = check_coalgebra_basis(&c, opts)?;
    let m = basis.monad();
    let x = &*basis.algebra.carrier;
    let mut bad = None;
    for y in basis.y.elements() {
        if c.k[basis.i[y]] != m.unit(x, &basis.i[y])? {
            bad = Some(basis.y.name(y).to_string());
            break;
        }
    }
    r.push("bridge: (Ti∘d)∘i = η_X∘i", "exhaustive", basis.y.len() as u64, bad);
    if let Some(e) = diagram_error(&r) {
        return Err(e);
    }
    Ok((c, r))
}

/// Recovers a basis from a coalgebra satisfying the three diagrams: `Y` is
/// `{x | k(x) = η_X(x)}` with the inherited order, `i` the inclusion and
/// `d(x)` the unique `t ∈ T Y` with `Ti(t) = k(x)`.
pub fn jacobs_recover(c: &TCoalgebra, opts: &Opts) -> Result<GeneratorTriple> {
    let r = check_coalgebra_basis(c, opts)?;
    if let Some(e) = diagram_error(&r) {
        return Err(e);
    }
    let alg = &c.algebra;
    let m = &alg.monad;
    let x = &alg.carrier;
    let mut i = Vec::new();
    for v in x.elements() {
        if c.k[v] == m.unit(&**x, &v)? {
            i.push(v);
        }
    }
    if i.is_empty() {
        return Err(Error::NoSolution("the equaliser of k and η_X is empty".into()));
    }
    let y = Arc::new(Carrier::new(i.iter().map(|&v| x.name(v).to_string()))?.with_leq(|a, b| x.leq(i[a], i[b])));
    let mut pre: HashMap<TValue, Vec<TValue>> = HashMap::new();
    for t in m.enumerate(&*y, opts)? {
        let img = m.map(&t, &|v: &usize| Ok(i[*v]), &*y, &**x)?;
        pre.entry(img).or_default().push(t);
    }
    let mut d = Vec::with_capacity(x.len());
    for v in x.elements() {
        match pre.get(&c.k[v]).map(Vec::as_slice) {
            None | Some([]) => return Err(Error::NoSolution(format!("Ti(t) = k({})", x.name(v)))),
            Some([t]) => d.push(t.clone()),
            Some(_) => return Err(Error::AmbiguousSolution(format!("Ti(t) = k({})", x.name(v)))),
        }
    }
    let g = GeneratorTriple::new(alg.clone(), y, i, d)?;
    let (g, rep) = certify(g, opts)?;
    if g.status != Status::Basis {
        let f = rep.first_failure().unwrap();
        return Err(Error::LawFailed {
            law: f.law.clone(),
            witness: f.witness.clone().unwrap_or_default(),
        });
    }
    Ok(g)
}
