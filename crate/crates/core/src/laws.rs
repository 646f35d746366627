//! Monad-law checking: both unit laws on `T X` and associativity on `T³X`.

use crate::error::{guard, Error, Result};
use crate::finite::Carrier;
use crate::monad::{all_subsets, Monad, Space, TSpace};
use crate::report::{Mode, Opts, Report};
use crate::tvalue::TVal;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) fn rng_for(opts: &Opts, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed() ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub(crate) fn mode_label(m: &Monad, opts: &Opts) -> String {
    match (&opts.mode, m.bound_label(opts)) {
        (Mode::Exhaustive, Some(b)) => format!("exhaustive({b})"),
        (mode, Some(b)) => format!("{mode}({b})"),
        (mode, None) => mode.to_string(),
    }
}

/// Elements of `T S`: all of them, or `n` samples with leaves drawn uniformly.
pub(crate) fn t_domain<S: Space>(m: &Monad, sp: &S, opts: &Opts, salt: u64) -> Result<Vec<TVal<S::Elem>>> {
    match opts.mode {
        Mode::Exhaustive => m.enumerate(sp, opts),
        Mode::Sampled { samples, .. } => {
            let mut rng = rng_for(opts, salt);
            let elems = sp.elements()?;
            if elems.is_empty() {
                return m.enumerate(sp, opts);
            }
            let mut pick = |r: &mut ChaCha8Rng| Ok(elems[rand::Rng::gen_range(r, 0..elems.len())].clone());
            (0..samples).map(|_| m.sample(sp, &mut pick, &mut rng, opts)).collect()
        }
    }
}

/// Samples of `T² S`, drawing inner values with `m.sample`.
pub(crate) fn sample_t2<S: Space>(
    m: &Monad,
    sp: &S,
    t1: &TSpace<'_, S>,
    opts: &Opts,
    samples: usize,
    salt: u64,
) -> Result<Vec<TVal<TVal<S::Elem>>>> {
    let mut rng = rng_for(opts, salt);
    let elems = sp.elements()?;
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut pick1 = |r: &mut ChaCha8Rng| -> Result<S::Elem> {
            if elems.is_empty() {
                return Err(Error::Invalid("cannot sample over an empty carrier".into()));
            }
            Ok(elems[rand::Rng::gen_range(r, 0..elems.len())].clone())
        };
        let mut pick2 = |r: &mut ChaCha8Rng| m.sample(sp, &mut pick1, r, opts);
        out.push(m.sample(t1, &mut pick2, &mut rng, opts)?);
    }
    Ok(out)
}

type T3<E> = TVal<TVal<TVal<E>>>;

/// Checks `μ∘ηT = id`, `μ∘Tη = id` on `T X` and `μ∘μT = μ∘Tμ` on `T³X`.
///
/// Distribution and List are infinite; exhaustive mode for them means
/// exhaustive within the enumeration bound, and the certificates say so.
/// For List the `T³X` bound additionally caps the total number of letters at
/// `max_len`, since words of words of words explode otherwise.
/// For Neighbourhood, exhaustive associativity is decided through probe sets:
/// both composites send `Ψ` to `{A | S_A ∈ Ψ}` for a set `S_A ⊆ T²X`, so they
/// agree on all of `T³X` iff their probe sets agree for every `A ⊆ X`.
pub fn check_monad_laws(m: &Monad, x: &Carrier, opts: &Opts) -> Result<Report> {
    let mode = mode_label(m, opts);
    let t1 = TSpace::new(m, x, opts);
    let mut report = Report::new();

    // Unit laws on T X.
    let tx = t_domain(m, x, opts, 1)?;
    let units: Vec<TVal<usize>> = x.elements().map(|e| m.unit(x, &e)).collect::<Result<_>>()?;
    let mut fail_left = None;
    let mut fail_right = None;
    for t in &tx {
        if fail_left.is_none() {
            let lhs = m.mult(x, &m.unit(&t1, t)?)?;
            if &lhs != t {
                fail_left = Some(m.render(x, t));
            }
        }
        if fail_right.is_none() {
            let teta = m.map(t, &|e: &usize| Ok(units[*e].clone()), x, &t1)?;
            if &m.mult(x, &teta)? != t {
                fail_right = Some(m.render(x, t));
            }
        }
    }
    report.push("unit: μ∘η_T = id", mode.clone(), tx.len() as u64, fail_left);
    report.push("unit: μ∘Tη = id", mode.clone(), tx.len() as u64, fail_right);

    // Associativity on T³X.
    let t2 = TSpace::new(m, &t1, opts);
    match (&opts.mode, m) {
        (Mode::Exhaustive, Monad::Neighbourhood) => {
            report.extend(nbhd_assoc_probes(m, x, &t1, &t2)?);
        }
        (Mode::Exhaustive, Monad::List { max_len }) => {
            let ttt = bounded_list_t3(x, *max_len);
            guard("bounded T³X for the list monad", ttt.len() as u128, opts.max_enum)?;
            let label = format!("exhaustive(len<={max_len}, letters<={max_len})");
            report.extend(assoc_on(m, x, &t1, &t2, &ttt, &label)?);
        }
        (Mode::Exhaustive, _) => {
            let t3 = TSpace::new(m, &t2, opts);
            let ttt = t3.elements()?;
            report.extend(assoc_on(m, x, &t1, &t2, &ttt, &mode)?);
        }
        (Mode::Sampled { samples, .. }, _) => {
            let mut rng = rng_for(opts, 3);
            let elems: Vec<usize> = x.elements().collect();
            let mut ttt = Vec::with_capacity(*samples);
            for _ in 0..*samples {
                let mut pick1 = |r: &mut ChaCha8Rng| -> Result<usize> {
                    if elems.is_empty() {
                        return Err(Error::Invalid("cannot sample over an empty carrier".into()));
                    }
                    Ok(elems[rand::Rng::gen_range(r, 0..elems.len())])
                };
                let mut pick2 = |r: &mut ChaCha8Rng| m.sample(x, &mut pick1, r, opts);
                let mut pick3 = |r: &mut ChaCha8Rng| m.sample(&t1, &mut pick2, r, opts);
                ttt.push(m.sample(&t2, &mut pick3, &mut rng, opts)?);
            }
            report.extend(assoc_on(m, x, &t1, &t2, &ttt, &mode)?);
        }
    }
    Ok(report)
}

fn assoc_on<'a>(
    m: &Monad,
    x: &Carrier,
    t1: &TSpace<'a, Carrier>,
    t2: &TSpace<'_, TSpace<'a, Carrier>>,
    ttt: &[T3<usize>],
    mode: &str,
) -> Result<Report> {
    let mut report = Report::new();
    let mut witness = None;
    for t in ttt {
        let lhs = m.mult(x, &m.mult(t1, t)?)?;
        let tmu = m.map(t, &|inner| m.mult(x, inner), t2, t1)?;
        let rhs = m.mult(x, &tmu)?;
        if lhs != rhs {
            witness = Some(m.render(t2, t));
            break;
        }
    }
    report.push("associativity: μ∘μT = μ∘Tμ", mode, ttt.len() as u64, witness);
    Ok(report)
}

/// Words of words of words over `x`, each of length at most `max_len`, with
/// at most `max_len` letters in total.
fn bounded_list_t3(x: &Carrier, max_len: usize) -> Vec<T3<usize>> {
    fn words<E: Clone>(items: &[(E, usize)], max_len: usize, max_letters: usize) -> Vec<(Vec<E>, usize)> {
        let mut out = vec![(vec![], 0)];
        let mut layer = vec![(vec![], 0usize)];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (w, n) in &layer {
                for (e, k) in items {
                    if n + k <= max_letters {
                        let mut w2 = w.clone();
                        w2.push(e.clone());
                        next.push((w2, n + k));
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
    let letters: Vec<(usize, usize)> = x.elements().map(|e| (e, 1)).collect();
    let l1: Vec<(TVal<usize>, usize)> = words(&letters, max_len, max_len)
        .into_iter()
        .map(|(w, n)| (TVal::Word(w), n))
        .collect();
    let l2: Vec<(TVal<TVal<usize>>, usize)> = words(&l1, max_len, max_len)
        .into_iter()
        .map(|(w, n)| (TVal::Word(w), n))
        .collect();
    words(&l2, max_len, max_len).into_iter().map(|(w, _)| TVal::Word(w)).collect()
}

/// Exhaustive associativity for the neighbourhood monad via probe sets.
fn nbhd_assoc_probes<'a>(
    m: &Monad,
    x: &Carrier,
    t1: &TSpace<'a, Carrier>,
    t2: &TSpace<'_, TSpace<'a, Carrier>>,
) -> Result<Report> {
    let nx = t1.elements()?;
    let n2x = t2.elements()?;
    let subsets = all_subsets(&x.elements().collect::<Vec<_>>());
    // μ_X on all of T²X, using the real multiplication.
    let mu_all: Vec<TVal<usize>> = n2x.iter().map(|w| m.mult(x, w)).collect::<Result<_>>()?;
    let mut probe_witness = None;
    let mut composite_witness = None;
    let mut instances = 0u64;
    for a in &subsets {
        // Q_A = {U ∈ NX | A ∈ U}
        let q_a: Vec<TVal<usize>> = nx
            .iter()
            .filter(|u| matches!(u, TVal::Nbhd(s) if s.binary_search(a).is_ok()))
            .cloned()
            .collect();
        // A ∈ μ(μ_T(Ψ)) iff S_A ∈ Ψ, with S_A = {W ∈ N²X | Q_A ∈ W}.
        let s_left: Vec<TVal<TVal<usize>>> = n2x
            .iter()
            .filter(|w| matches!(w, TVal::Nbhd(fam) if fam.binary_search(&q_a).is_ok()))
            .cloned()
            .collect();
        // A ∈ μ(Tμ(Ψ)) iff S'_A ∈ Ψ, with S'_A = {W | A ∈ μ(W)}.
        let s_right: Vec<TVal<TVal<usize>>> = n2x
            .iter()
            .zip(&mu_all)
            .filter(|(_, mw)| matches!(mw, TVal::Nbhd(fam) if fam.binary_search(a).is_ok()))
            .map(|(w, _)| w.clone())
            .collect();
        instances += n2x.len() as u64;
        if probe_witness.is_none() && s_left != s_right {
            probe_witness = Some(format!("probe sets differ for A = {}", x_render(x, a)));
        }
        // Evaluate both real composites on the two probe points.
        for probe in [&s_left, &s_right] {
            let psi: T3<usize> = TVal::Nbhd(vec![probe.clone()]);
            let lhs = m.mult(x, &m.mult(t1, &psi)?)?;
            let tmu = m.map(
                &psi,
                &|w: &TVal<TVal<usize>>| {
                    let k = n2x.binary_search(w).map_err(|_| Error::Invalid("value outside T²X".into()))?;
                    Ok(mu_all[k].clone())
                },
                t2,
                t1,
            )?;
            let rhs = m.mult(x, &tmu)?;
            instances += 1;
            if composite_witness.is_none() && lhs != rhs {
                composite_witness = Some(format!("probe for A = {}", x_render(x, a)));
            }
        }
    }
    let mut report = Report::new();
    report.push(
        "associativity: μ∘μT = μ∘Tμ",
        "exhaustive(probe sets over T²X)",
        instances,
        probe_witness.or(composite_witness),
    );
    Ok(report)
}

fn x_render(x: &Carrier, a: &[usize]) -> String {
    format!("{{{}}}", a.iter().map(|&e| x.name(e)).collect::<Vec<_>>().join(","))
}
