//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p tbasis --test acceptance -- --nocapture`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};
use tbasis::algebra::{free_algebra, Algebra, AlgebraRef, Structure};
use tbasis::bialgebra::{
    bialgebra_basis_check, bialgebra_generator_from_basis, canonical_law, determinize, free_bialgebra_from_generator, semiring_module,
    BialgebraCandidate, DetMode, FCoalgebra, FTCoalgebra, MooreShape, OutVal, Outputs, PENTAGON, SAME_STRUCTURE,
};
use tbasis::generator::{
    all_homs, basis_to_iso, birkhoff_basis, canonical_free_basis, certify, check_basis, check_generator, extend_along_basis,
    identity_generator, join_irreducible_generator, search_basis, GeneratorTriple, Status,
};
use tbasis::jacobs::{jacobs_coalgebra, jacobs_recover};
use tbasis::json;
use tbasis::kleisli::{
    all_kleisli, associated_morphism, basis_representation, change_of_basis, check_representation, kleisli_compose, KleisliMorphism,
};
use tbasis::laws::check_monad_laws;
use tbasis::rfsa::{canonical_rfsa, check_equivalence, nfa_to_min_dfa, Equivalence, Nfa};
use tbasis::{Carrier, CarrierRef, FiniteFunction, Mode, Monad, Opts, Report, Semiring, TVal};

fn exhaustive() -> Opts {
    Opts::default()
}

fn carrier(names: &[&str]) -> CarrierRef {
    Arc::new(Carrier::new(names.iter().copied()).unwrap())
}

fn lattice(names: &[&str], hasse: &[(&str, &str)]) -> AlgebraRef {
    let c = Carrier::poset(names.iter().copied(), hasse).unwrap();
    Arc::new(Algebra::new(Monad::Powerset, Arc::new(c), Structure::Join).unwrap())
}

fn div12() -> Carrier {
    let names = ["1", "2", "3", "4", "6", "12"];
    Carrier::new(names).unwrap().with_leq(|a, b| names[b].parse::<u32>().unwrap() % names[a].parse::<u32>().unwrap() == 0)
}

fn f2() -> Monad {
    Monad::Multiset(Arc::new(Semiring::f2()))
}

fn boolean() -> Monad {
    Monad::Multiset(Arc::new(Semiring::boolean()))
}

/// Collects failure messages for one criterion.
#[derive(Default)]
struct Failures(Vec<String>);

impl Failures {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }

    fn report(&mut self, what: &str, r: &Report) {
        if let Some(c) = r.first_failure() {
            self.0.push(format!("{what}: {} at {}", c.law, c.witness.clone().unwrap_or_default()));
        }
    }
}

fn criterion(n: u32, title: &str, budget: Duration, body: impl FnOnce(&mut Failures) -> String) -> bool {
    let start = Instant::now();
    let mut f = Failures::default();
    let summary = body(&mut f);
    let took = start.elapsed();
    if took > budget {
        f.0.push(format!("runtime {:.1}s exceeds {:.0}s", took.as_secs_f64(), budget.as_secs_f64()));
    }
    let ok = f.0.is_empty();
    println!(
        "{} [{n}] {title}: {summary}; tolerance exact; {:.2}s (budget {:.0}s)",
        if ok { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        budget.as_secs_f64()
    );
    for m in f.0.iter().take(5) {
        println!("      {m}");
    }
    ok
}

fn monad_laws(f: &mut Failures) -> String {
    let x = |n: usize| Carrier::new((0..n).map(|i| format!("x{i}"))).unwrap();
    let sampled = |n: usize| Opts::default().with_mode(Mode::sampled(n, 2024));
    let cases: Vec<(&str, Monad, Carrier, Opts)> = vec![
        ("powerset |X|=1", Monad::Powerset, x(1), exhaustive()),
        ("powerset |X|=2", Monad::Powerset, x(2), exhaustive()),
        ("powerset |X|=3", Monad::Powerset, x(3), sampled(10_000)),
        ("downset div12", Monad::Downset, div12(), sampled(10_000)),
        ("multiset bool |X|=1", boolean(), x(1), exhaustive()),
        ("multiset bool |X|=2", boolean(), x(2), exhaustive()),
        ("multiset f2 |X|=1", f2(), x(1), exhaustive()),
        ("multiset f2 |X|=2", f2(), x(2), exhaustive()),
        ("neighbourhood |X|=1", Monad::Neighbourhood, x(1), exhaustive()),
        ("distribution |X|=1", Monad::Distribution, x(1), sampled(1000).with_max_den(12)),
        ("distribution |X|=2", Monad::Distribution, x(2), sampled(1000).with_max_den(12)),
        ("distribution |X|=3", Monad::Distribution, x(3), sampled(1000).with_max_den(12)),
        ("list |X|=1", Monad::List { max_len: 3 }, x(1), exhaustive()),
        ("list |X|=2", Monad::List { max_len: 3 }, x(2), exhaustive()),
    ];
    let mut instances = 0;
    for (name, m, c, opts) in &cases {
        match check_monad_laws(m, c, opts) {
            Ok(r) => {
                f.report(name, &r);
                instances += r.certificates.iter().map(|c| c.instances).sum::<u64>();
                if *name == "powerset |X|=2" {
                    let assoc = r.certificates.iter().find(|c| c.law.starts_with("associativity")).map_or(0, |c| c.instances);
                    f.check(assoc == 65536, || format!("powerset |X|=2: {assoc} associativity instances, expected 65536"));
                }
            }
            Err(e) => f.0.push(format!("{name}: {e}")),
        }
    }
    format!("{} configurations, {instances} instances", cases.len())
}

/// Every basis fixture, certified.
fn basis_fixtures() -> Vec<(String, GeneratorTriple)> {
    let opts = exhaustive();
    let mut out = Vec::new();
    let mut push = |name: String, g: GeneratorTriple| out.push((name, certify(g, &opts).unwrap().0));
    for (name, m, xs) in [
        ("free powerset {a}", Monad::Powerset, vec!["a"]),
        ("free powerset {a,b}", Monad::Powerset, vec!["a", "b"]),
        ("free powerset {a,b,c}", Monad::Powerset, vec!["a", "b", "c"]),
        ("free multiset bool {u,v}", boolean(), vec!["u", "v"]),
        ("free multiset f2 {u,v}", f2(), vec!["u", "v"]),
        ("free neighbourhood {a}", Monad::Neighbourhood, vec!["a"]),
    ] {
        push(name.into(), canonical_free_basis(&m, &carrier(&xs), &opts).unwrap());
    }
    let chain = Arc::new(Carrier::poset(["x0", "x1"], &[("x0", "x1")]).unwrap());
    push("free downset on 2-chain".into(), canonical_free_basis(&Monad::Downset, &chain, &opts).unwrap());
    let div = Arc::new(Algebra::new(Monad::Downset, Arc::new(div12()), Structure::Join).unwrap());
    push("birkhoff div12".into(), birkhoff_basis(&div, &opts).unwrap());
    let square = lattice(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]);
    for (k, g) in search_basis(&square, 2, &opts).unwrap().into_iter().enumerate() {
        push(format!("2x2 basis {k}"), g);
    }
    let f2sq = Arc::new(free_algebra(&f2(), &carrier(&["u", "v"]), &opts).unwrap());
    for (k, g) in search_basis(&f2sq, 2, &opts).unwrap().into_iter().enumerate() {
        push(format!("F2² basis {k}"), g);
    }
    out
}

/// Algebras with at most four elements to extend into.
fn extension_targets(m: &Monad) -> Vec<AlgebraRef> {
    let opts = exhaustive();
    match m {
        Monad::Powerset => vec![
            Arc::new(Algebra::disjunctive()),
            lattice(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]),
            lattice(&["0", "m", "1"], &[("0", "m"), ("m", "1")]),
        ],
        Monad::Downset => {
            let c = Arc::new(Carrier::poset(["0", "1", "2"], &[("0", "1"), ("1", "2")]).unwrap());
            vec![Arc::new(Algebra::new(Monad::Downset, c, Structure::Join).unwrap())]
        }
        Monad::Multiset(s) => vec![
            Arc::new(semiring_module(s).unwrap()),
            Arc::new(free_algebra(m, &carrier(&["p", "q"]), &opts).unwrap()),
        ],
        Monad::Neighbourhood => vec![Arc::new(Algebra::boolean_two())],
        _ => vec![],
    }
}

fn basis_derivations(f: &mut Failures) -> String {
    let opts = exhaustive();
    let fixtures = basis_fixtures();
    let mut extensions = 0;
    for (name, g) in &fixtures {
        f.check(g.status == Status::Basis, || format!("{name}: not certified as a basis"));
        let r = certify(g.clone(), &opts).unwrap().1;
        for law in ["derived: d∘h = μ_Y∘Td", "derived: d∘i = η_Y", "derived: Ti∘d injective with left inverse h"] {
            f.check(r.get(law).is_some_and(|c| c.holds()), || format!("{name}: {law}"));
        }
        f.check(basis_to_iso(g, &opts).is_ok(), || format!("{name}: i♯ is not an isomorphism with inverse d"));
        for target in extension_targets(g.monad()) {
            let brute = (g.algebra.len() <= 6).then(|| all_homs(&g.algebra, &target, &opts).unwrap());
            // Free downset algebras extend monotone maps only.
            let monotone = |fun: &FiniteFunction| {
                *g.monad() != Monad::Downset
                    || g.y.elements().all(|a| g.y.elements().all(|b| !g.y.leq(a, b) || target.carrier.leq(fun.apply(a), fun.apply(b))))
            };
            for fun in FiniteFunction::all(&g.y, &target.carrier).into_iter().filter(|f| monotone(f)) {
                extensions += 1;
                match extend_along_basis(g, &fun, &target, &opts) {
                    Err(e) => f.0.push(format!("{name}: extension fails: {e}")),
                    Ok(h) => {
                        if let Some(homs) = &brute {
                            let agreeing: Vec<&Vec<usize>> = homs.iter().filter(|t| g.i.iter().enumerate().all(|(y, &x)| t[x] == fun.apply(y))).collect();
                            f.check(agreeing.len() == 1 && *agreeing[0] == h.map, || {
                                format!("{name}: {} homomorphisms extend {:?}", agreeing.len(), fun.table)
                            });
                        }
                    }
                }
            }
        }
    }
    format!("{} bases, {extensions} extensions", fixtures.len())
}

struct RepresentationCase {
    name: &'static str,
    bases: Vec<GeneratorTriple>,
    /// Kleisli endomorphisms per ordered pair of bases, indexed by `(α, β)`.
    kleisli: HashMap<(usize, usize), Vec<KleisliMorphism>>,
    endos: Vec<tbasis::algebra::AlgebraHom>,
    /// Compositionality over all triples of bases uses every `stride`-th endomorphism.
    stride: usize,
}

fn representation_case(name: &'static str, monad: Monad, base: &[&str], brute_endos: bool, stride: usize) -> RepresentationCase {
    let opts = exhaustive();
    let alg = Arc::new(free_algebra(&monad, &carrier(base), &opts).unwrap());
    let bases = search_basis(&alg, base.len(), &opts).unwrap();
    let mut kleisli = HashMap::new();
    for a in 0..bases.len() {
        for b in 0..bases.len() {
            kleisli.insert((a, b), all_kleisli(&monad, &bases[a].y, &bases[b].y, &opts).unwrap());
        }
    }
    let endos = if brute_endos {
        all_homs(&alg, &alg, &opts)
            .unwrap()
            .into_iter()
            .map(|t| tbasis::algebra::certify_hom(alg.clone(), alg.clone(), t, &opts).unwrap())
            .collect()
    } else {
        kleisli[&(0, 0)].iter().map(|p| associated_morphism(p, &bases[0], &bases[0], &opts).unwrap()).collect()
    };
    RepresentationCase {
        name,
        bases,
        kleisli,
        endos,
        stride,
    }
}

fn same_table(a: &KleisliMorphism, b: &KleisliMorphism) -> bool {
    a.table == b.table && a.domain == b.domain && a.codomain == b.codomain
}

/// `f_{αβ}`, checked for soundness and round trip on first use.
fn rep_of(c: &RepresentationCase, cache: &mut HashMap<(usize, usize, usize), KleisliMorphism>, key: (usize, usize, usize), f: &mut Failures) -> KleisliMorphism {
    let (fi, a, b) = key;
    cache
        .entry(key)
        .or_insert_with(|| {
            let (k, r) = check_representation(&c.endos[fi], &c.bases[a], &c.bases[b], &exhaustive()).unwrap();
            f.report(&format!("{} soundness/round trip", c.name), &r);
            k
        })
        .clone()
}

/// `p^{αβ}`, checked to represent back to `p` on first use.
fn assoc_of(c: &RepresentationCase, cache: &mut HashMap<(usize, usize, usize), Vec<usize>>, key: (usize, usize, usize), f: &mut Failures) -> Vec<usize> {
    let (a, b, pi) = key;
    cache
        .entry(key)
        .or_insert_with(|| {
            let p = &c.kleisli[&(a, b)][pi];
            let h = associated_morphism(p, &c.bases[a], &c.bases[b], &exhaustive()).unwrap();
            let back = basis_representation(&h, &c.bases[a], &c.bases[b]).unwrap();
            f.check(same_table(&back, p), || format!("{}: p ↦ p^{{αβ}} ↦ representation is not the identity", c.name));
            h.map
        })
        .clone()
}

fn representation_suite(f: &mut Failures) -> String {
    let opts = exhaustive();
    let cases = [
        representation_case("F2²", f2(), &["u", "v"], true, 1),
        representation_case("P{a,b}", Monad::Powerset, &["a", "b"], true, 1),
        representation_case("P{a,b,c}", Monad::Powerset, &["a", "b", "c"], false, 37),
    ];
    let mut checks = 0u64;
    for c in &cases {
        let name = c.name;
        if name == "F2²" {
            f.check(c.bases.len() == 6 && c.endos.len() == 16, || format!("F2²: {} bases, {} endomorphisms", c.bases.len(), c.endos.len()));
        }
        let n = c.bases.len();
        let mut rep = HashMap::new();
        let mut assoc = HashMap::new();
        // Round trips on every endomorphism and Kleisli map; off the standard
        // pair of bases the larger cases are strided.
        for a in 0..n {
            for b in 0..n {
                let step = if (a, b) == (0, 0) { 1 } else { c.stride };
                for fi in (0..c.endos.len()).step_by(step) {
                    rep_of(c, &mut rep, (fi, a, b), f);
                    checks += 2;
                }
                for pi in (0..c.kleisli[&(a, b)].len()).step_by(step) {
                    assoc_of(c, &mut assoc, (a, b, pi), f);
                    checks += 1;
                }
            }
        }
        let compose_maps = |g: &[usize], h: &[usize]| -> Vec<usize> { h.iter().map(|&x| g[x]).collect() };
        for a in 0..n {
            for b in 0..n {
                for g in 0..n {
                    let step = if (a, b, g) == (0, 0, 0) { 1 } else { c.stride };
                    let m = c.endos.len();
                    for fi in (0..m).step_by(step) {
                        for gi in (0..m).step_by(step) {
                            // g_{βγ} · f_{αβ} = (g ∘ f)_{αγ}
                            let lhs = kleisli_compose(&rep_of(c, &mut rep, (gi, b, g), f), &rep_of(c, &mut rep, (fi, a, b), f), &opts).unwrap();
                            let gf = compose_maps(&c.endos[gi].map, &c.endos[fi].map);
                            let gfi = c.endos.iter().position(|e| e.map == gf).unwrap();
                            let rhs = rep_of(c, &mut rep, (gfi, a, g), f);
                            f.check(same_table(&lhs, &rhs), || format!("{name}: compositionality at ({a},{b},{g})"));
                            checks += 1;
                        }
                    }
                    let kl = &c.kleisli;
                    for pi in (0..kl[&(a, b)].len()).step_by(step) {
                        for qi in (0..kl[&(b, g)].len()).step_by(step) {
                            // q^{βγ} ∘ p^{αβ} = (q · p)^{αγ}
                            let qp = kleisli_compose(&kl[&(b, g)][qi], &kl[&(a, b)][pi], &opts).unwrap();
                            let qpi = kl[&(a, g)].iter().position(|p| same_table(p, &qp)).unwrap();
                            let lhs = compose_maps(&assoc_of(c, &mut assoc, (b, g, qi), f), &assoc_of(c, &mut assoc, (a, b, pi), f));
                            let rhs = assoc_of(c, &mut assoc, (a, g, qpi), f);
                            f.check(lhs == rhs, || format!("{name}: dual compositionality at ({a},{b},{g})"));
                            checks += 1;
                        }
                    }
                }
            }
        }
        // f_{α′α′} = p⁻¹ · f_{αα} · p
        for (fi, hom) in c.endos.iter().enumerate() {
            for a in 0..n {
                for a2 in 0..n {
                    if a != a2 && fi % c.stride != 0 {
                        continue;
                    }
                    match change_of_basis(hom, &c.bases[a], &c.bases[a2], &c.bases[a], &c.bases[a2], &opts) {
                        Ok(cb) => f.report(&format!("{name} similarity"), &cb.report),
                        Err(e) => f.0.push(format!("{name}: {e}")),
                    }
                    checks += 1;
                }
            }
        }
    }
    format!("F2² (6 bases, 16 endomorphisms), P{{a,b}}, P{{a,b,c}}; {checks} table comparisons")
}

/// Join-irreducibles of a finite lattice by brute force: not the bottom and
/// not the join of two strictly smaller elements.
fn join_irreducibles_oracle(n: usize, join: impl Fn(usize, usize) -> usize, bottom: usize) -> BTreeSet<usize> {
    (0..n)
        .filter(|&x| x != bottom && !(0..n).any(|a| (0..n).any(|b| a != x && b != x && join(a, b) == x)))
        .collect()
}

fn birkhoff(f: &mut Failures) -> String {
    let opts = exhaustive();
    let div = div12();
    let nums: Vec<u32> = div.names().iter().map(|s| s.parse().unwrap()).collect();
    let lcm = |a: u32, b: u32| {
        let mut m = a.max(b);
        while m % a != 0 || m % b != 0 {
            m += 1;
        }
        m
    };
    let oracle = join_irreducibles_oracle(6, |a, b| nums.iter().position(|&n| n == lcm(nums[a], nums[b])).unwrap(), 0);
    let oracle: BTreeSet<String> = oracle.iter().map(|&i| div.name(i).to_string()).collect();
    f.check(oracle == BTreeSet::from(["2", "3", "4"].map(String::from)), || format!("oracle gives {oracle:?}"));
    let alg = Arc::new(Algebra::new(Monad::Downset, Arc::new(div), Structure::Join).unwrap());
    let b = birkhoff_basis(&alg, &opts).unwrap();
    let got: BTreeSet<String> = b.i.iter().map(|&x| alg.carrier.name(x).to_string()).collect();
    f.check(got == oracle, || format!("div12 join-irreducibles {got:?}"));
    f.check(b.status == Status::Basis, || "div12: not a basis".into());

    let m3 = lattice(&["0", "a", "b", "c", "1"], &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")]);
    let m3_join = |a: usize, b: usize| match (a, b) {
        (0, y) | (y, 0) => y,
        (x, y) if x == y => x,
        _ => 4,
    };
    let oracle = join_irreducibles_oracle(5, m3_join, 0);
    let (g, _) = join_irreducible_generator(&m3, &opts).unwrap();
    f.check(g.i.iter().copied().collect::<BTreeSet<_>>() == oracle, || "diamond join-irreducibles differ from the oracle".into());
    f.check(g.status == Status::Generator, || format!("diamond: status {:?}", g.status));
    let r = check_basis(&g, &opts).unwrap();
    let w = r.first_failure().and_then(|c| c.witness.clone()).unwrap_or_default();
    f.check(w.starts_with("collision in TY"), || format!("diamond: basis witness `{w}`"));
    format!("div12 ↦ {{2,3,4}} basis; diamond generator rejected with `{w}`")
}

fn load_corpus() -> Vec<(String, Nfa)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../cli/fixtures/nfa");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let v = json::parse(&std::fs::read_to_string(&p).unwrap()).unwrap();
            (p.file_stem().unwrap().to_string_lossy().into_owned(), json::nfa_from_json(&v).unwrap())
        })
        .collect()
}

fn with_initial(n: &Nfa, initial: Vec<usize>) -> Nfa {
    Nfa { initial, ..n.clone() }
}

/// Whether the language of `state` in `r` is `u⁻¹L` for some word `u`,
/// searching the reachable state sets of the input.
fn is_residual(input: &Nfa, r: &Nfa, state: usize) -> bool {
    let own = with_initial(r, vec![state]);
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([input.initial.clone()]);
    while let Some(s) = queue.pop_front() {
        if !seen.insert(s.clone()) {
            continue;
        }
        if check_equivalence(&with_initial(input, s.clone()), &own).unwrap() == Equivalence::Equal {
            return true;
        }
        for a in input.alphabet.elements() {
            queue.push_back(input.step(&s, a));
        }
    }
    false
}

fn rfsa_pipeline(f: &mut Failures) -> String {
    let opts = exhaustive();
    let corpus = load_corpus();
    f.check(corpus.len() >= 12, || format!("only {} NFAs", corpus.len()));
    let mut states = 0;
    for (name, n) in &corpus {
        f.check(n.states.len() <= 6 && n.alphabet.len() == 2, || format!("{name}: outside the corpus bounds"));
        let r = match canonical_rfsa(n, &opts) {
            Ok(r) => r,
            Err(e) => {
                f.0.push(format!("{name}: {e}"));
                continue;
            }
        };
        states += r.nfa.states.len();
        f.check(check_equivalence(n, &r.nfa).unwrap() == Equivalence::Equal, || format!("{name}: languages differ"));
        for q in r.nfa.states.elements() {
            f.check(is_residual(n, &r.nfa, q), || format!("{name}: state {} is not a residual", r.nfa.states.name(q)));
        }
        let min = nfa_to_min_dfa(n).states.len();
        f.check(r.nfa.states.len() <= min, || format!("{name}: {} states > {min}", r.nfa.states.len()));
        f.check(r.generator.status != Status::Unchecked, || format!("{name}: not a generator"));
        f.report(name, &check_generator(&r.generator).unwrap());
    }
    format!("{} NFAs, {states} canonical RFSA states in total", corpus.len())
}

fn powerset_law(alphabet: &CarrierRef) -> Arc<tbasis::bialgebra::DistributiveLaw> {
    let shape = MooreShape {
        alphabet: alphabet.clone(),
        outputs: Outputs::standard(&Monad::Powerset).unwrap(),
    };
    Arc::new(canonical_law(&Monad::Powerset, shape, &exhaustive()).unwrap())
}

/// A deterministic machine as an `FT`-coalgebra through the unit.
fn lift(m: &Monad, fc: &FCoalgebra) -> FTCoalgebra {
    let trans = fc.trans.iter().map(|r| r.iter().map(|&q| m.unit(&*fc.carrier, &q).unwrap()).collect()).collect();
    FTCoalgebra::new(m.clone(), fc.carrier.clone(), fc.alphabet.clone(), trans, fc.out.clone()).unwrap()
}

fn bialgebra_suite(f: &mut Failures) -> String {
    let opts = exhaustive();
    let mut inputs: Vec<(String, FTCoalgebra, Outputs)> = Vec::new();
    for (name, n) in load_corpus() {
        if n.states.len() <= 4 {
            inputs.push((name, n.to_ftcoalgebra().unwrap(), Outputs::standard(&Monad::Powerset).unwrap()));
        }
    }
    let f2m = f2();
    let two = carrier(&["p", "q"]);
    let weighted = FTCoalgebra::new(
        f2m.clone(),
        two.clone(),
        carrier(&["a", "b"]),
        vec![vec![TVal::Weights(vec![(0, 1), (1, 1)]), TVal::Weights(vec![(1, 1)])], vec![TVal::Weights(vec![]), TVal::Weights(vec![(0, 1)])]],
        vec![OutVal::Elem(0), OutVal::Elem(1)],
    )
    .unwrap();
    inputs.push(("weighted f2".into(), weighted, Outputs::standard(&f2m).unwrap()));

    let mut pentagons = 0;
    for (name, ft, outputs) in &inputs {
        let shape = MooreShape {
            alphabet: ft.alphabet.clone(),
            outputs: outputs.clone(),
        };
        let law = Arc::new(canonical_law(&ft.monad, shape, &opts).unwrap());
        let b = match determinize(ft, &law, DetMode::Full, &opts) {
            Ok(b) => b,
            Err(e) => {
                f.0.push(format!("{name}: {e}"));
                continue;
            }
        };
        pentagons += 1;
        f.check(b.certificate.get(PENTAGON).is_some_and(|c| c.holds() && c.mode == "exhaustive"), || format!("{name}: pentagon"));
        let canonical = canonical_free_basis(&ft.monad, &ft.carrier, &opts).unwrap();
        let mut generators = vec![canonical.clone()];
        // The identity generator's free bialgebra lives on T(TX).
        if b.algebra.len() <= 4 {
            generators.push(identity_generator(&b.algebra, &opts).unwrap());
        }
        for g in generators {
            match free_bialgebra_from_generator(&b, &g, &opts) {
                Ok(fb) => {
                    f.report(&format!("{name} free bialgebra"), &fb.report);
                    if g.status == Status::Basis {
                        for law in ["d∘i♯ = id_TY", "i♯∘d = id_X"] {
                            f.check(fb.report.get(law).is_some_and(|c| c.holds()), || format!("{name}: {law}"));
                        }
                    }
                }
                Err(e) => f.0.push(format!("{name}: free bialgebra ({} elements in Y): {e}", g.y.len())),
            }
        }
        match bialgebra_generator_from_basis(&b, &canonical, &opts) {
            Ok((_, r)) => f.report(&format!("{name} generator from basis"), &r),
            Err(e) => f.0.push(format!("{name}: generator from basis: {e}")),
        }
    }

    // Candidate bases of determinised deterministic machines.
    let mut candidates = 0;
    let mut machines: Vec<(String, FCoalgebra)> = Vec::new();
    for (name, n) in load_corpus() {
        let d = nfa_to_min_dfa(&n);
        if d.states.len() <= 4 {
            machines.push((name, d.to_fcoalgebra()));
        }
    }
    for (name, fc) in &machines {
        for m in [Monad::Powerset, f2()] {
            let outputs = Outputs::standard(&m).unwrap();
            let law = if m == Monad::Powerset {
                powerset_law(&fc.alphabet)
            } else {
                let shape = MooreShape {
                    alphabet: fc.alphabet.clone(),
                    outputs: outputs.clone(),
                };
                Arc::new(canonical_law(&m, shape, &opts).unwrap())
            };
            let b = determinize(&lift(&m, fc), &law, DetMode::Full, &opts).unwrap();
            let basis = canonical_free_basis(&m, &fc.carrier, &opts).unwrap();
            let cand = BialgebraCandidate {
                y: fc.carrier.clone(),
                k_y: fc.clone(),
                i: basis.i.clone(),
                d: basis.d.clone(),
            };
            let r = bialgebra_basis_check(&b, &cand, &opts).unwrap();
            f.report(&format!("{name} ({m}) candidate"), &r);
            f.check(r.get(SAME_STRUCTURE).is_some_and(|c| c.holds()), || format!("{name} ({m}): structures differ"));
            candidates += 1;
        }
    }
    format!("{pentagons} determinisations, {candidates} candidate bases")
}

fn jacobs_round_trip(f: &mut Failures) -> String {
    let opts = exhaustive();
    // Tk for the neighbourhood fixture lands in N of a 65536-point set.
    let (fixtures, skipped): (Vec<_>, Vec<_>) = basis_fixtures().into_iter().partition(|(_, g)| *g.monad() != Monad::Neighbourhood);
    for (name, g) in &fixtures {
        match jacobs_coalgebra(g, &opts) {
            Err(e) => f.0.push(format!("{name}: {e}")),
            Ok((c, r)) => {
                f.report(name, &r);
                for law in ["left", "middle", "right", "bridge"] {
                    f.check(r.certificates.iter().any(|c| c.law.starts_with(law) && c.holds() && c.mode == "exhaustive"), || {
                        format!("{name}: {law}")
                    });
                }
                match jacobs_recover(&c, &opts) {
                    Err(e) => f.0.push(format!("{name}: recovery: {e}")),
                    Ok(back) => {
                        f.check(back.status == Status::Basis, || format!("{name}: recovered triple is not a basis"));
                        f.check(g.i.iter().all(|x| back.i.contains(x)), || format!("{name}: recovered Y misses the image of i"));
                    }
                }
            }
        }
    }
    let skipped: Vec<&str> = skipped.iter().map(|(n, _)| n.as_str()).collect();
    format!("{} bases (not enumerable: {})", fixtures.len(), skipped.join(", "))
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "monad laws", s(30), monad_laws),
        criterion(2, "basis-law derivations", s(10), basis_derivations),
        criterion(3, "representation theory", s(10), representation_suite),
        criterion(4, "Birkhoff fixture", s(5), birkhoff),
        criterion(5, "canonical RFSA pipeline", s(60), rfsa_pipeline),
        criterion(6, "bialgebras", s(30), bialgebra_suite),
        criterion(7, "coalgebra round trip", s(5), jacobs_round_trip),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    assert_eq!(passed, results.len());
}
