//! Kleisli morphisms `Y → T Z` as generalised matrices, and the
//! representation of algebra homomorphisms with respect to bases.

use crate::algebra::{certify_hom, AlgebraHom};
use crate::error::{Error, Result};
use crate::finite::CarrierRef;
use crate::generator::{GeneratorTriple, Status};
use crate::monad::Monad;
use crate::report::{Opts, Report};
use crate::tvalue::{TVal, TValue};

/// A table `domain → T codomain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleisliMorphism {
    pub monad: Monad,
    pub domain: CarrierRef,
    pub codomain: CarrierRef,
    pub table: Vec<TValue>,
}

impl KleisliMorphism {
    pub fn new(monad: Monad, domain: CarrierRef, codomain: CarrierRef, table: Vec<TValue>) -> Result<Self> {
        if table.len() != domain.len() {
            return Err(Error::CarrierMismatch("Kleisli table is not total".into()));
        }
        for t in &table {
            monad.validate(&*codomain, t)?;
        }
        Ok(KleisliMorphism {
            monad,
            domain,
            codomain,
            table,
        })
    }

    /// The Kleisli identity `η`.
    pub fn identity(monad: &Monad, c: &CarrierRef) -> Result<Self> {
        let table = c.elements().map(|e| monad.unit(&**c, &e)).collect::<Result<Vec<_>>>()?;
        Ok(KleisliMorphism {
            monad: monad.clone(),
            domain: c.clone(),
            codomain: c.clone(),
            table,
        })
    }

    pub fn apply(&self, y: usize) -> &TValue {
        &self.table[y]
    }

    /// Kleisli extension `μ ∘ T self` applied to `t ∈ T domain`.
    pub fn extend(&self, t: &TValue, opts: &Opts) -> Result<TValue> {
        self.monad
            .bind(t, &|y: &usize| Ok(self.table[*y].clone()), &*self.domain, &*self.codomain, opts)
    }

    pub fn render(&self) -> String {
        self.domain
            .elements()
            .map(|y| format!("{} ↦ {}", self.domain.name(y), self.monad.render(&*self.codomain, &self.table[y])))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// `(q · p)(y) = μ(T q (p(y)))`.
pub fn kleisli_compose(q: &KleisliMorphism, p: &KleisliMorphism, opts: &Opts) -> Result<KleisliMorphism> {
    if q.domain != p.codomain || q.monad != p.monad {
        return Err(Error::CarrierMismatch("domain of q must be the codomain of p".into()));
    }
    let table = p.table.iter().map(|t| q.extend(t, opts)).collect::<Result<Vec<_>>>()?;
    Ok(KleisliMorphism {
        monad: p.monad.clone(),
        domain: p.domain.clone(),
        codomain: q.codomain.clone(),
        table,
    })
}

fn require_basis(b: &GeneratorTriple, what: &str) -> Result<()> {
    if b.status == Status::Basis {
        Ok(())
    } else {
        Err(Error::Invalid(format!("{what} is not a certified basis")))
    }
}

/// `f_{αβ} = d_β ∘ f ∘ i_α : Y_α → T Y_β`.
pub fn basis_representation(f: &AlgebraHom, alpha: &GeneratorTriple, beta: &GeneratorTriple) -> Result<KleisliMorphism> {
    require_basis(alpha, "α")?;
    require_basis(beta, "β")?;
    if alpha.algebra != f.source || beta.algebra != f.target {
        return Err(Error::CarrierMismatch("bases must live on the source and target of f".into()));
    }
    let table = alpha.i.iter().map(|&x| beta.d[f.map[x]].clone()).collect();
    Ok(KleisliMorphism {
        monad: alpha.monad().clone(),
        domain: alpha.y.clone(),
        codomain: beta.y.clone(),
        table,
    })
}

/// `p^{αβ} = h_β ∘ T i_β ∘ μ ∘ T p ∘ d_α : X_α → X_β`, re-certified as a
/// homomorphism.
pub fn associated_morphism(p: &KleisliMorphism, alpha: &GeneratorTriple, beta: &GeneratorTriple, opts: &Opts) -> Result<AlgebraHom> {
    require_basis(alpha, "α")?;
    require_basis(beta, "β")?;
    if *p.domain != *alpha.y || *p.codomain != *beta.y {
        return Err(Error::CarrierMismatch("p must map Y_α into T Y_β".into()));
    }
    let map = alpha
        .d
        .iter()
        .map(|t| beta.i_sharp(&p.extend(t, opts)?))
        .collect::<Result<Vec<_>>>()?;
    let hom = certify_hom(alpha.algebra.clone(), beta.algebra.clone(), map, opts)?;
    if let Some(c) = hom.certificate.first_failure() {
        return Err(Error::LawFailed {
            law: c.law.clone(),
            witness: c.witness.clone().unwrap_or_default(),
        });
    }
    Ok(hom)
}

pub const SOUNDNESS: &str = "soundness: d_β∘f = f_{αβ}·d_α";
pub const ROUND_TRIP: &str = "round trip: associated morphism of f_{αβ} is f";

/// `f_{αβ}` together with its soundness on every `x ∈ X_α` and the round
/// trip back to `f`.
pub fn check_representation(
    f: &AlgebraHom,
    alpha: &GeneratorTriple,
    beta: &GeneratorTriple,
    opts: &Opts,
) -> Result<(KleisliMorphism, Report)> {
    let rep = basis_representation(f, alpha, beta)?;
    let x = &alpha.algebra.carrier;
    let mut bad = None;
    for v in x.elements() {
        if beta.d[f.map[v]] != rep.extend(&alpha.d[v], opts)? {
            bad = Some(x.name(v).to_string());
            break;
        }
    }
    let mut r = Report::new();
    r.push(SOUNDNESS, "exhaustive", x.len() as u64, bad);
    let back = associated_morphism(&rep, alpha, beta, opts)?;
    let bad = x.elements().find(|&v| back.map[v] != f.map[v]).map(|v| x.name(v).to_string());
    r.push(ROUND_TRIP, "exhaustive", x.len() as u64, bad);
    Ok((rep, r))
}

/// `d_target ∘ i_source : Y_source → T Y_target` for two bases of one algebra.
pub fn transition(source: &GeneratorTriple, target: &GeneratorTriple) -> Result<KleisliMorphism> {
    if source.algebra != target.algebra {
        return Err(Error::CarrierMismatch("bases of different algebras".into()));
    }
    Ok(KleisliMorphism {
        monad: source.monad().clone(),
        domain: source.y.clone(),
        codomain: target.y.clone(),
        table: source.i.iter().map(|&x| target.d[x].clone()).collect(),
    })
}

/// Kleisli isomorphisms relating two representations of one homomorphism.
#[derive(Clone, Debug)]
pub struct ChangeOfBasis {
    /// `p = d_α ∘ i_α′`.
    pub p: KleisliMorphism,
    /// `q = d_β′ ∘ i_β`.
    pub q: KleisliMorphism,
    pub p_inv: KleisliMorphism,
    pub q_inv: KleisliMorphism,
    pub report: Report,
}

/// Computes `p`, `q` and their inverses and verifies
/// `f_{α′β′} = q · f_{αβ} · p` by table comparison. When `β = α` and
/// `β′ = α′` it also verifies `q = p⁻¹`.
pub fn change_of_basis(
    f: &AlgebraHom,
    alpha: &GeneratorTriple,
    alpha2: &GeneratorTriple,
    beta: &GeneratorTriple,
    beta2: &GeneratorTriple,
    opts: &Opts,
) -> Result<ChangeOfBasis> {
    let p = transition(alpha2, alpha)?;
    let p_inv = transition(alpha, alpha2)?;
    let q = transition(beta, beta2)?;
    let q_inv = transition(beta2, beta)?;
    let mut report = Report::new();
    let mut check = |law: &str, lhs: &KleisliMorphism, rhs: &KleisliMorphism| -> Result<()> {
        let bad = lhs.domain.elements().find(|&y| lhs.table[y] != rhs.table[y]);
        let witness = bad.map(|y| {
            format!(
                "{}: {} vs {}",
                lhs.domain.name(y),
                lhs.monad.render(&*lhs.codomain, &lhs.table[y]),
                rhs.monad.render(&*rhs.codomain, &rhs.table[y])
            )
        });
        report.push(law, "exhaustive", lhs.domain.len() as u64, witness.clone());
        match witness {
            Some(w) => Err(Error::SimilarityFailed(format!("{law} at {w}"))),
            None => Ok(()),
        }
    };
    let m = alpha.monad();
    let id = |c: &CarrierRef| KleisliMorphism::identity(m, c);
    check("p⁻¹ · p = η", &kleisli_compose(&p_inv, &p, opts)?, &id(&alpha2.y)?)?;
    check("p · p⁻¹ = η", &kleisli_compose(&p, &p_inv, opts)?, &id(&alpha.y)?)?;
    check("q⁻¹ · q = η", &kleisli_compose(&q_inv, &q, opts)?, &id(&beta.y)?)?;
    check("q · q⁻¹ = η", &kleisli_compose(&q, &q_inv, opts)?, &id(&beta2.y)?)?;
    let lhs = basis_representation(f, alpha2, beta2)?;
    let rhs = kleisli_compose(&q, &kleisli_compose(&basis_representation(f, alpha, beta)?, &p, opts)?, opts)?;
    check("f_{α′β′} = q · f_{αβ} · p", &lhs, &rhs)?;
    if beta == alpha && beta2 == alpha2 {
        check("q = p⁻¹", &q, &p_inv)?;
    }
    Ok(ChangeOfBasis {
        p,
        q,
        p_inv,
        q_inv,
        report,
    })
}

/// Matrix view of a multiset Kleisli morphism: rows indexed by the codomain,
/// columns by the domain.
pub fn render_matrix(k: &KleisliMorphism) -> Result<String> {
    let Monad::Multiset(s) = &k.monad else {
        return Err(Error::NotApplicable("matrix view needs a multiset monad".into()));
    };
    let zero = s.name_of(s.zero).to_string();
    let cells: Vec<Vec<String>> = k
        .codomain
        .elements()
        .map(|z| {
            k.domain
                .elements()
                .map(|y| match &k.table[y] {
                    TVal::Weights(w) => w.iter().find(|(e, _)| *e == z).map(|(_, c)| s.name_of(*c).to_string()).unwrap_or(zero.clone()),
                    _ => zero.clone(),
                })
                .collect()
        })
        .collect();
    let head_w = k.codomain.names().iter().map(String::len).max().unwrap_or(0);
    let col_w: Vec<usize> = k
        .domain
        .elements()
        .map(|y| cells.iter().map(|r| r[y].len()).chain([k.domain.name(y).len()]).max().unwrap())
        .collect();
    let mut out = format!("{:head_w$} |", "");
    for y in k.domain.elements() {
        out += &format!(" {:>w$}", k.domain.name(y), w = col_w[y]);
    }
    for z in k.codomain.elements() {
        out += &format!("\n{:head_w$} |", k.codomain.name(z));
        for y in k.domain.elements() {
            out += &format!(" {:>w$}", cells[z][y], w = col_w[y]);
        }
    }
    Ok(out)
}

/// Every Kleisli table `domain → T codomain` (the codomain's `T` must be
/// enumerable).
pub fn all_kleisli(monad: &Monad, domain: &CarrierRef, codomain: &CarrierRef, opts: &Opts) -> Result<Vec<KleisliMorphism>> {
    let values = monad.enumerate(&**codomain, opts)?;
    crate::error::guard("Kleisli tables", (values.len() as u128).checked_pow(domain.len() as u32).unwrap_or(u128::MAX), opts.max_enum)?;
    Ok(crate::finite::all_tables(domain.len(), values.len())
        .into_iter()
        .map(|t| KleisliMorphism {
            monad: monad.clone(),
            domain: domain.clone(),
            codomain: codomain.clone(),
            table: t.into_iter().map(|j| values[j].clone()).collect(),
        })
        .collect())
}
