//! JSON formats. Elements are referred to by name everywhere; set-like
//! values are sorted by declaration order on load so output is canonical.

use crate::algebra::{free_algebra, Algebra, AlgebraRef, Structure};
use crate::bialgebra::{FTCoalgebra, OutVal, Outputs};
use crate::error::{Error, Result};
use crate::finite::{Carrier, Semiring};
use crate::generator::{GeneratorTriple, Status};
use crate::kleisli::KleisliMorphism;
use crate::monad::Monad;
use crate::report::Opts;
use crate::rfsa::Nfa;
use crate::tvalue::{parse_rat, rat_to_string, TVal, TValue};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| invalid(format!("missing field `{key}`")))
}

fn as_str(v: &Value) -> Result<&str> {
    v.as_str().ok_or_else(|| invalid(format!("expected a string, got {v}")))
}

fn as_array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().ok_or_else(|| invalid(format!("expected an array, got {v}")))
}

fn as_object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| invalid(format!("expected an object, got {v}")))
}

fn strings(v: &Value) -> Result<Vec<String>> {
    as_array(v)?.iter().map(|e| as_str(e).map(str::to_string)).collect()
}

fn index(c: &Carrier, v: &Value) -> Result<usize> {
    let name = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(invalid(format!("expected an element name, got {v}"))),
    };
    c.index_of(&name).map_err(|_| Error::UnknownElement(name))
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Parses a JSON document.
pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| invalid(format!("JSON: {e}")))
}

/// `{"elements": [...], "order": [["a","b"], ...]}`; `order` lists Hasse
/// edges `a ≤ b` and may be omitted for a discrete carrier. A bare array of
/// names is accepted too.
pub fn carrier_from_json(v: &Value) -> Result<Carrier> {
    if v.is_array() {
        return Carrier::new(strings(v)?);
    }
    let c = Carrier::new(strings(field(v, "elements")?)?)?;
    match v.get("order") {
        None | Some(Value::Null) => Ok(c),
        Some(order) => {
            let pairs = as_array(order)?
                .iter()
                .map(|p| match as_array(p)?.as_slice() {
                    [a, b] => Ok((index(&c, a)?, index(&c, b)?)),
                    _ => Err(invalid("order entries are pairs")),
                })
                .collect::<Result<Vec<_>>>()?;
            c.with_order(&pairs)
        }
    }
}

pub fn carrier_to_json(c: &Carrier) -> Value {
    let mut v = json!({ "elements": c.names() });
    if c.is_poset() {
        let order: Vec<Value> = c.hasse_pairs().iter().map(|&(a, b)| json!([c.name(a), c.name(b)])).collect();
        v["order"] = Value::Array(order);
    }
    v
}

/// `{"elements": [...], "plus": [[..]], "times": [[..]], "zero": "0", "one": "1"}`
/// with tables of element names, or one of the strings `"boolean"`, `"f2"`.
pub fn semiring_from_json(v: &Value) -> Result<Semiring> {
    match v {
        Value::String(s) if s == "boolean" || s == "bool" => return Ok(Semiring::boolean()),
        Value::String(s) if s == "f2" => return Ok(Semiring::f2()),
        Value::String(s) => return Err(invalid(format!("unknown semiring `{s}`"))),
        _ => {}
    }
    let c = Arc::new(Carrier::new(strings(field(v, "elements")?)?)?);
    let table = |key: &str| -> Result<Vec<Vec<usize>>> {
        as_array(field(v, key)?)?
            .iter()
            .map(|row| as_array(row)?.iter().map(|e| index(&c, e)).collect())
            .collect()
    };
    let name = v.get("name").and_then(Value::as_str).unwrap_or("custom");
    Semiring::new(name, c.clone(), table("plus")?, table("times")?, index(&c, field(v, "zero")?)?, index(&c, field(v, "one")?)?)
}

pub fn semiring_to_json(s: &Semiring) -> Value {
    let table = |t: &Vec<Vec<usize>>| -> Value { t.iter().map(|r| r.iter().map(|&e| s.name_of(e)).collect::<Vec<_>>()).collect() };
    json!({
        "name": s.name,
        "elements": s.carrier.names(),
        "plus": table(&s.plus),
        "times": table(&s.times),
        "zero": s.name_of(s.zero),
        "one": s.name_of(s.one),
    })
}

/// `"powerset"`, `"downset"`, `"neighbourhood"`, `"distribution"`,
/// `"multiset:boolean"`, `"multiset:f2"`, `"list:3"`, or the objects
/// `{"multiset": <semiring>}` and `{"list": {"maxLen": 3}}`.
pub fn monad_from_json(v: &Value) -> Result<Monad> {
    match v {
        Value::String(s) => monad_from_name(s),
        Value::Object(o) => {
            if let Some(s) = o.get("multiset") {
                Ok(Monad::Multiset(Arc::new(semiring_from_json(s)?)))
            } else if let Some(l) = o.get("list") {
                let n = field(l, "maxLen")?.as_u64().ok_or_else(|| invalid("maxLen is a number"))?;
                Ok(Monad::List { max_len: n as usize })
            } else {
                Err(invalid(format!("unknown monad {v}")))
            }
        }
        _ => Err(invalid(format!("unknown monad {v}"))),
    }
}

pub fn monad_from_name(s: &str) -> Result<Monad> {
    Ok(match s {
        "powerset" => Monad::Powerset,
        "downset" => Monad::Downset,
        "neighbourhood" | "neighborhood" => Monad::Neighbourhood,
        "distribution" => Monad::Distribution,
        _ => {
            if let Some(sr) = s.strip_prefix("multiset:") {
                Monad::Multiset(Arc::new(semiring_from_json(&Value::String(sr.into()))?))
            } else if let Some(n) = s.strip_prefix("list:") {
                Monad::List {
                    max_len: n.parse().map_err(|_| invalid(format!("bad list bound `{n}`")))?,
                }
            } else {
                return Err(invalid(format!("unknown monad `{s}`")));
            }
        }
    })
}

pub fn monad_to_json(m: &Monad) -> Value {
    match m {
        Monad::Multiset(s) if s.name == "bool" => json!("multiset:boolean"),
        Monad::Multiset(s) if s.name == "f2" => json!("multiset:f2"),
        Monad::Multiset(s) => json!({ "multiset": semiring_to_json(s) }),
        Monad::List { max_len } => json!({ "list": { "maxLen": max_len } }),
        m => json!(m.name()),
    }
}

/// `{"set": [...]}`, `{"weights": {"a": "1"}}`, `{"dist": {"a": "1/2"}}`,
/// `{"nbhd": [["a"], []]}`, `{"word": [...]}`. A bare array is read as a set.
pub fn tvalue_from_json(m: &Monad, c: &Carrier, v: &Value) -> Result<TValue> {
    let names = |v: &Value| -> Result<Vec<usize>> { as_array(v)?.iter().map(|e| index(c, e)).collect() };
    let (kind, body) = match v {
        Value::Array(_) => ("set", v),
        Value::Object(o) if o.len() == 1 => {
            let (k, b) = o.iter().next().unwrap();
            (k.as_str(), b)
        }
        _ => return Err(Error::MalformedNesting(format!("not a T-value: {v}"))),
    };
    let t = match kind {
        "set" => TVal::Set(sorted(names(body)?)),
        "word" => TVal::Word(names(body)?),
        "nbhd" => {
            let mut fam: Vec<Vec<usize>> = as_array(body)?.iter().map(|s| names(s).map(sorted)).collect::<Result<_>>()?;
            fam.sort();
            fam.dedup();
            TVal::Nbhd(fam)
        }
        "weights" => {
            let Monad::Multiset(s) = m else {
                return Err(Error::MalformedNesting(format!("weights for the {m} monad")));
            };
            let mut w = Vec::new();
            for (k, val) in as_object(body)? {
                let e = index(c, &Value::String(k.clone()))?;
                let sv = index(&s.carrier, val)?;
                if sv != s.zero {
                    w.push((e, sv));
                }
            }
            w.sort();
            TVal::Weights(w)
        }
        "dist" => {
            let mut d = Vec::new();
            for (k, val) in as_object(body)? {
                let e = index(c, &Value::String(k.clone()))?;
                let text = match val {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    _ => return Err(invalid(format!("probability {val}"))),
                };
                let p = parse_rat(&text).ok_or_else(|| invalid(format!("`{text}` is not a rational")))?;
                d.push((e, p));
            }
            d.sort();
            TVal::Dist(d)
        }
        k => return Err(Error::MalformedNesting(format!("unknown T-value kind `{k}`"))),
    };
    if t.kind() != m.kind() {
        return Err(Error::MalformedNesting(format!("{} value for the {m} monad", t.kind())));
    }
    m.validate(c, &t)?;
    Ok(t)
}

pub fn tvalue_to_json(m: &Monad, c: &Carrier, t: &TValue) -> Value {
    let names = |v: &[usize]| -> Value { v.iter().map(|&e| c.name(e)).collect() };
    match t {
        TVal::Set(v) => json!({ "set": names(v) }),
        TVal::Word(v) => json!({ "word": names(v) }),
        TVal::Nbhd(v) => json!({ "nbhd": v.iter().map(|s| names(s)).collect::<Vec<_>>() }),
        TVal::Weights(v) => {
            let Monad::Multiset(s) = m else { unreachable!() };
            let o: Map<String, Value> = v.iter().map(|&(e, w)| (c.name(e).to_string(), json!(s.name_of(w)))).collect();
            json!({ "weights": o })
        }
        TVal::Dist(v) => {
            let o: Map<String, Value> = v.iter().map(|(e, p)| (c.name(*e).to_string(), json!(rat_to_string(p)))).collect();
            json!({ "dist": o })
        }
    }
}

/// `{"monad": ..., "carrier": {...}, "structure": {...}}`. Structures:
/// `{"rule": "join"}`, `{"rule": "support-join"}`, `{"rule": "boolean"}`,
/// `{"rule": "module", "add": [[..]], "zero": x, "act": [[..]]}` (`act[s][x]`,
/// rows by semiring element), `{"rule": "monoid", "mul": [[..]], "unit": x}`,
/// `{"rule": "free", "base": <carrier>}` (carrier omitted), or
/// `{"table": [[<TValue>, x], ...]}`. For `join` an `order` inside the
/// structure replaces the carrier's.
pub fn algebra_from_json(v: &Value, opts: &Opts) -> Result<Algebra> {
    let m = monad_from_json(field(v, "monad")?)?;
    let st = field(v, "structure")?;
    if st.get("rule").and_then(Value::as_str) == Some("free") {
        let base = Arc::new(carrier_from_json(field(st, "base")?)?);
        return free_algebra(&m, &base, opts);
    }
    let mut cv = field(v, "carrier")?.clone();
    if let (Some(order), Some(o)) = (st.get("order"), cv.as_object_mut()) {
        o.insert("order".into(), order.clone());
    }
    let c = Arc::new(carrier_from_json(&cv)?);
    let elems = |v: &Value, car: &Carrier| -> Result<Vec<Vec<usize>>> {
        as_array(v)?.iter().map(|row| as_array(row)?.iter().map(|e| index(car, e)).collect()).collect()
    };
    let structure = if let Some(tab) = st.get("table") {
        let mut t = BTreeMap::new();
        for entry in as_array(tab)? {
            match as_array(entry)?.as_slice() {
                [arg, val] => {
                    t.insert(tvalue_from_json(&m, &c, arg)?, index(&c, val)?);
                }
                _ => return Err(invalid("table entries are [T-value, element] pairs")),
            }
        }
        Structure::Table(t)
    } else {
        match as_str(field(st, "rule")?)? {
            "join" => Structure::Join,
            "support-join" => Structure::SupportJoin,
            "boolean" => Structure::Boolean,
            "module" => {
                let Monad::Multiset(s) = &m else {
                    return Err(Error::NotApplicable("module structure needs a multiset monad".into()));
                };
                Structure::Module {
                    add: elems(field(st, "add")?, &c)?,
                    zero: index(&c, field(st, "zero")?)?,
                    act: elems(field(st, "act")?, &c)?.into_iter().take(s.len()).collect(),
                }
            }
            "monoid" => Structure::Monoid {
                mul: elems(field(st, "mul")?, &c)?,
                unit: index(&c, field(st, "unit")?)?,
            },
            r => return Err(invalid(format!("unknown structure rule `{r}`"))),
        }
    };
    Algebra::new(m, c, structure)
}

pub fn algebra_to_json(a: &Algebra) -> Value {
    let c = &a.carrier;
    let rows = |t: &Vec<Vec<usize>>| -> Value { t.iter().map(|r| r.iter().map(|&e| c.name(e)).collect::<Vec<_>>()).collect() };
    let structure = match &a.structure {
        Structure::Table(t) => json!({
            "table": t.iter().map(|(k, &x)| json!([tvalue_to_json(&a.monad, c, k), c.name(x)])).collect::<Vec<_>>()
        }),
        Structure::Module { add, zero, act } => json!({ "rule": "module", "add": rows(add), "zero": c.name(*zero), "act": rows(act) }),
        Structure::Monoid { mul, unit } => json!({ "rule": "monoid", "mul": rows(mul), "unit": c.name(*unit) }),
        Structure::Free { base, .. } => json!({ "rule": "free", "base": carrier_to_json(base) }),
        s => json!({ "rule": s.rule_name() }),
    };
    json!({ "monad": monad_to_json(&a.monad), "carrier": carrier_to_json(c), "structure": structure })
}

/// `{"Y": <carrier>, "i": {"y": "x"}, "d": {"x": <TValue>}}` over a given
/// algebra. `status` and `mode` are ignored on load; status starts unchecked.
pub fn triple_from_json(alg: &AlgebraRef, v: &Value) -> Result<GeneratorTriple> {
    let y = Arc::new(carrier_from_json(field(v, "Y")?)?);
    let x = &alg.carrier;
    let io = as_object(field(v, "i")?)?;
    let i = y
        .names()
        .iter()
        .map(|n| index(x, io.get(n).ok_or_else(|| invalid(format!("i undefined at `{n}`")))?))
        .collect::<Result<Vec<_>>>()?;
    let d_obj = as_object(field(v, "d")?)?;
    let d = x
        .names()
        .iter()
        .map(|n| tvalue_from_json(&alg.monad, &y, d_obj.get(n).ok_or_else(|| invalid(format!("d undefined at `{n}`")))?))
        .collect::<Result<Vec<_>>>()?;
    GeneratorTriple::new(alg.clone(), y, i, d)
}

pub fn triple_to_json(g: &GeneratorTriple) -> Value {
    let x = &g.algebra.carrier;
    let i: Map<String, Value> = g.y.elements().map(|y| (g.y.name(y).to_string(), json!(x.name(g.i[y])))).collect();
    let d: Map<String, Value> = x.elements().map(|v| (x.name(v).to_string(), tvalue_to_json(g.monad(), &g.y, &g.d[v]))).collect();
    let status = match g.status {
        Status::Unchecked => "unchecked",
        Status::Generator => "generator",
        Status::Basis => "basis",
    };
    json!({ "Y": carrier_to_json(&g.y), "i": i, "d": d, "status": status, "mode": g.mode })
}

/// `{"monad": ..., "domain": <carrier>, "codomain": <carrier>, "table": {"y": <TValue>}}`.
pub fn kleisli_from_json(v: &Value) -> Result<KleisliMorphism> {
    let m = monad_from_json(field(v, "monad")?)?;
    let dom = Arc::new(carrier_from_json(field(v, "domain")?)?);
    let cod = Arc::new(carrier_from_json(field(v, "codomain")?)?);
    let tab = as_object(field(v, "table")?)?;
    let table = dom
        .names()
        .iter()
        .map(|n| tvalue_from_json(&m, &cod, tab.get(n).ok_or_else(|| invalid(format!("table undefined at `{n}`")))?))
        .collect::<Result<Vec<_>>>()?;
    KleisliMorphism::new(m, dom, cod, table)
}

pub fn kleisli_to_json(k: &KleisliMorphism) -> Value {
    let table: Map<String, Value> = k
        .domain
        .elements()
        .map(|y| (k.domain.name(y).to_string(), tvalue_to_json(&k.monad, &k.codomain, &k.table[y])))
        .collect();
    json!({
        "monad": monad_to_json(&k.monad),
        "domain": carrier_to_json(&k.domain),
        "codomain": carrier_to_json(&k.codomain),
        "table": table,
    })
}

/// The output algebra of a coalgebra file: `"outputs"` holds an algebra, or
/// `"expectation"`; otherwise the standard one for the monad.
pub fn outputs_from_json(m: &Monad, v: &Value, opts: &Opts) -> Result<Outputs> {
    match v.get("outputs") {
        None => Outputs::standard(m),
        Some(Value::String(s)) if s == "expectation" => Ok(Outputs::Expectation),
        Some(a) => Ok(Outputs::Algebra(Arc::new(algebra_from_json(a, opts)?))),
    }
}

/// `{"monad": ..., "states": [...], "alphabet": [...], "trans": {"p": {"a": <TValue>}},
/// "out": {"p": <output>}}`; the monad defaults to powerset.
pub fn ftcoalgebra_from_json(v: &Value, opts: &Opts) -> Result<(FTCoalgebra, Outputs)> {
    let m = match v.get("monad") {
        Some(mv) => monad_from_json(mv)?,
        None => Monad::Powerset,
    };
    let outputs = outputs_from_json(&m, v, opts)?;
    let states = Arc::new(carrier_from_json(field(v, "states")?)?);
    let alphabet = Arc::new(carrier_from_json(field(v, "alphabet")?)?);
    let tr = as_object(field(v, "trans")?)?;
    let out = as_object(field(v, "out")?)?;
    let mut trans = Vec::with_capacity(states.len());
    let mut outs = Vec::with_capacity(states.len());
    for p in states.names() {
        let row = as_object(tr.get(p).ok_or_else(|| invalid(format!("no transitions for `{p}`")))?)?;
        trans.push(
            alphabet
                .names()
                .iter()
                .map(|a| tvalue_from_json(&m, &states, row.get(a).ok_or_else(|| invalid(format!("no `{a}` transition for `{p}`")))?))
                .collect::<Result<Vec<_>>>()?,
        );
        let o = out.get(p).ok_or_else(|| invalid(format!("no output for `{p}`")))?;
        let text = match o {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(invalid(format!("output {o}"))),
        };
        outs.push(outputs.parse(&text)?);
    }
    Ok((FTCoalgebra::new(m, states, alphabet, trans, outs)?, outputs))
}

pub fn ftcoalgebra_to_json(ft: &FTCoalgebra, outputs: &Outputs) -> Value {
    let c = &ft.carrier;
    let trans: Map<String, Value> = c
        .elements()
        .map(|p| {
            let row: Map<String, Value> = ft
                .alphabet
                .elements()
                .map(|a| (ft.alphabet.name(a).to_string(), tvalue_to_json(&ft.monad, c, &ft.trans[p][a])))
                .collect();
            (c.name(p).to_string(), Value::Object(row))
        })
        .collect();
    let out: Map<String, Value> = c.elements().map(|p| (c.name(p).to_string(), json!(outputs.render(&ft.out[p])))).collect();
    json!({
        "monad": monad_to_json(&ft.monad),
        "states": c.names(),
        "alphabet": ft.alphabet.names(),
        "trans": trans,
        "out": out,
    })
}

/// An output value rendered for reports.
pub fn outval_to_json(outputs: &Outputs, o: &OutVal) -> Value {
    json!(outputs.render(o))
}

/// `{"states": [...], "alphabet": [...], "initial": [...], "accepting": [...],
/// "trans": {"p": {"a": ["q", ...]}}}`. Transition targets may also be written
/// `{"set": [...]}`; missing entries mean no transition. Instead of
/// `accepting`, an `out` map with values `"0"`/`"1"` is accepted.
pub fn nfa_from_json(v: &Value) -> Result<Nfa> {
    let states = Arc::new(carrier_from_json(field(v, "states")?)?);
    let alphabet = Arc::new(carrier_from_json(field(v, "alphabet")?)?);
    let set = |v: &Value| -> Result<Vec<usize>> {
        let body = match v {
            Value::Object(o) if o.len() == 1 && o.contains_key("set") => &o["set"],
            Value::String(_) => return Ok(vec![index(&states, v)?]),
            v => v,
        };
        as_array(body)?.iter().map(|e| index(&states, e)).collect()
    };
    let initial = set(field(v, "initial")?)?;
    let accepting = match (v.get("accepting"), v.get("out")) {
        (Some(a), _) => set(a)?,
        (None, Some(o)) => {
            let o = as_object(o)?;
            states
                .elements()
                .filter(|&q| matches!(o.get(states.name(q)).map(|x| x.to_string().trim_matches('"').to_string()), Some(s) if s == "1"))
                .collect()
        }
        (None, None) => return Err(invalid("missing field `accepting`")),
    };
    let tr = as_object(field(v, "trans")?)?;
    for k in tr.keys() {
        states.index_of(k).map_err(|_| Error::UnknownElement(k.clone()))?;
    }
    let mut trans = vec![vec![Vec::new(); alphabet.len()]; states.len()];
    for (p, row) in tr {
        let p = states.index_of(p)?;
        for (a, targets) in as_object(row)? {
            let a = alphabet.index_of(a).map_err(|_| Error::UnknownElement(a.clone()))?;
            trans[p][a] = set(targets)?;
        }
    }
    Nfa::new(states, alphabet, initial, trans, accepting)
}

pub fn nfa_to_json(n: &Nfa) -> Value {
    let c = &n.states;
    let names = |v: &[usize]| -> Value { v.iter().map(|&q| c.name(q)).collect() };
    let trans: Map<String, Value> = c
        .elements()
        .map(|p| {
            let row: Map<String, Value> = n.alphabet.elements().map(|a| (n.alphabet.name(a).to_string(), names(&n.trans[p][a]))).collect();
            (c.name(p).to_string(), Value::Object(row))
        })
        .collect();
    json!({
        "states": c.names(),
        "alphabet": n.alphabet.names(),
        "initial": names(&n.initial),
        "accepting": names(&n.accepting),
        "trans": trans,
    })
}
