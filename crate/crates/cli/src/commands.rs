use std::path::Path;

use dessins_core::belyi::monodromy::svg;
use dessins_core::belyi::snap::{is_belyi_exact, snap_rational, DEFAULT_DENOMINATOR_BOUND};
use dessins_core::enumeration::{
    cache_dir, enumerate_dessins_with_cap, enumerate_regular_with_cap, DEFAULT_DEGREE_CAP, DEFAULT_REGULAR_CAP,
};
use dessins_core::fgroup::{parse_word, word_to_string};
use dessins_core::gt::{build_hn_with, estimate_hn_cost, parse_automorphism, HnOptions, DEFAULT_LEVEL_CAP};
use dessins_core::regularity::quotient;
use dessins_core::{
    act_on_dessin, automorphism_group, cached_enumerate, is_regular, k_character, monodromy, parse_dessin,
    regular_closure, setup_system_with, solve_system, tree_shabat, verify, BelyiCandidate, CycleType, Dessin, Error,
    GtGroup, Passport, Permutation, RationalFraction, Result, SolveOptions, SystemOptions,
};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::output::Output;
use crate::{BelyiCommand, Command, GlobalOpts};

pub fn run(cmd: Command, g: &GlobalOpts) -> Result<Output> {
    match cmd {
        Command::Info { dessin } => info(&read_dessin(&dessin)?),
        Command::Iso { a, b } => iso(&read_dessin(&a)?, &read_dessin(&b)?),
        Command::Aut { dessin } => aut(&read_dessin(&dessin)?),
        Command::Dual { dessin } => Ok(Output::Dessin(read_dessin(&dessin)?.dual())),
        Command::Swap { dessin } => Ok(Output::Dessin(read_dessin(&dessin)?.swap_colors())),
        Command::Closure { dessin } => closure(&read_dessin(&dessin)?),
        Command::Quotient { dessin, subgroup } => quotient_cmd(&read_dessin(&dessin)?, &subgroup),
        Command::Enumerate { n, catalog, no_cache } => enumerate(n, catalog, no_cache, g),
        Command::RegularCatalog { n } => regular_catalog(n, g),
        Command::Hn { n } => hn(n, g),
        Command::Gt { n } => gt(n, g),
        Command::Act { dessin, level, auto } => act(&read_dessin(&dessin)?, level, &auto, g),
        Command::Belyi(b) => belyi(b, g),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_dessin(path: &Path) -> Result<Dessin> {
    parse_dessin(&read(path)?)
}

fn read_fraction(path: &Path) -> Result<RationalFraction> {
    RationalFraction::from_json(&read(path)?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("value serializes")
}

fn one_based(p: &Permutation) -> Vec<usize> {
    p.images().iter().map(|x| x + 1).collect()
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn info(d: &Dessin) -> Result<Output> {
    let group_order = d.cartographic_group().order();
    let mut doc = json!({
        "degree": d.degree(),
        "connected": d.is_connected(),
        "group_order": group_order.to_string().parse::<Value>().expect("integer"),
        "sigma_cycle_type": to_value(&d.sigma().cycle_type()),
        "alpha_cycle_type": to_value(&d.alpha().cycle_type()),
        "phi_cycle_type": to_value(&d.phi().cycle_type()),
    });
    if d.is_connected() {
        let p = d.passport()?;
        doc["passport"] = to_value(&p);
        doc["genus"] = json!(p.genus);
        doc["automorphisms"] = json!(automorphism_group(d)?.order() as u64);
        doc["regular"] = json!(is_regular(d)?);
        doc["planar_tree"] = json!(d.is_planar_tree());
    }
    Ok(Output::Document(doc))
}

fn iso(a: &Dessin, b: &Dessin) -> Result<Output> {
    let w = a.is_isomorphic(b);
    Ok(Output::Document(json!({
        "isomorphic": w.is_some(),
        "witness": w.as_ref().map(one_based),
    })))
}

fn aut(d: &Dessin) -> Result<Output> {
    let g = automorphism_group(d)?;
    let gens: Vec<Vec<Vec<usize>>> = g.generators().iter().map(Permutation::to_one_based_cycles).collect();
    Ok(Output::Document(json!({
        "order": g.order() as u64,
        "generators": gens,
    })))
}

fn closure(d: &Dessin) -> Result<Output> {
    let cl = regular_closure(d)?;
    Ok(Output::Document(json!({
        "order": cl.regular.order(),
        "dessin": to_value(cl.regular.dessin()),
        "base_dart": cl.base_dart + 1,
        "covering": cl.covering.iter().map(|x| x + 1).collect::<Vec<_>>(),
    })))
}

fn quotient_cmd(d: &Dessin, subgroup: &str) -> Result<Output> {
    if !is_regular(d)? {
        return Err(Error::NotRegular);
    }
    let r = regular_closure(d)?.regular;
    let gens = subgroup
        .split(',')
        .filter(|w| !w.trim().is_empty())
        .map(|w| Ok(r.group().eval_word(&parse_word(w)?)))
        .collect::<Result<Vec<usize>>>()?;
    Ok(Output::Dessin(quotient(&r, &gens)?))
}

fn enumerate(n: usize, catalog: bool, no_cache: bool, g: &GlobalOpts) -> Result<Output> {
    let cap = g.cap.unwrap_or(DEFAULT_DEGREE_CAP);
    let cat = if no_cache {
        enumerate_dessins_with_cap(n, cap)?
    } else {
        cached_enumerate(n, cap, &cache_dir())?
    };
    if catalog {
        let doc: Value = serde_json::from_str(&cat.to_json())?;
        return Ok(Output::Document(doc));
    }
    Ok(Output::Lines(cat.entries.iter().map(to_value).collect()))
}

fn regular_catalog(n: usize, g: &GlobalOpts) -> Result<Output> {
    let cat = enumerate_regular_with_cap(n, g.cap.unwrap_or(DEFAULT_REGULAR_CAP))?;
    Ok(Output::Lines(
        cat.entries
            .iter()
            .map(|r| json!({ "order": r.order(), "dessin": to_value(r.dessin()) }))
            .collect(),
    ))
}

fn hn_options(g: &GlobalOpts) -> HnOptions {
    HnOptions {
        level_cap: g.cap.unwrap_or(DEFAULT_LEVEL_CAP),
        ..HnOptions::default()
    }
}

fn hn(n: usize, g: &GlobalOpts) -> Result<Output> {
    let opts = hn_options(g);
    if n > opts.level_cap {
        return Err(Error::CapExceeded {
            what: "H_n level",
            needed: n as u128,
            cap: opts.level_cap as u128,
        });
    }
    let cost = estimate_hn_cost(n)?;
    let h = build_hn_with(n, opts)?;
    let grp = h.group();
    Ok(Output::Document(json!({
        "level": n,
        "order": h.order(),
        "components": h.components().len(),
        "component_orders": h.components().iter().map(|r| r.order()).collect::<Vec<_>>(),
        "sigma_order": grp.element_order(grp.sigma()),
        "alpha_order": grp.element_order(grp.alpha()),
        "phi_order": grp.element_order(grp.phi()),
        "exponent": grp.exponent(),
        "abelian": grp.is_abelian(),
        "cost": to_value(&cost),
    })))
}

fn gt(n: usize, g: &GlobalOpts) -> Result<Output> {
    let h = build_hn_with(n, hn_options(g))?;
    let gt = GtGroup::compute(&h)?;
    let elements = gt
        .elements
        .iter()
        .map(|e| {
            Ok(json!({
                "k": e.k,
                "k_character": k_character(e, n)?,
                "f": word_to_string(&e.f_word),
                "witness_ks": e.witness_ks,
                "out_class": e.out_class.id,
            }))
        })
        .collect::<Result<Vec<Value>>>()?;
    let grp = h.group();
    Ok(Output::Document(json!({
        "level": n,
        "hn_order": h.order(),
        "sigma_order": grp.element_order(grp.sigma()),
        "alpha_order": grp.element_order(grp.alpha()),
        "aut_order": gt.out.aut_count(),
        "out_order": gt.out.len(),
        "gt_size": gt.len(),
        "elements": elements,
    })))
}

fn act(d: &Dessin, level: usize, spec: &str, g: &GlobalOpts) -> Result<Output> {
    let h = build_hn_with(level, hn_options(g))?;
    let gamma = parse_automorphism(h.group(), spec)?;
    Ok(Output::Dessin(act_on_dessin(&h, &gamma, d)?))
}

fn solve_options(g: &GlobalOpts) -> SolveOptions {
    let mut opts = SolveOptions {
        seed: g.seed,
        ..SolveOptions::default()
    };
    if let Some(t) = g.tol {
        opts.tol = t;
    }
    opts
}

/// Parses `4,2,1/2,2,1,1,1/7`.
fn parse_passport(s: &str) -> Result<Passport> {
    let parts: Vec<&str> = s.split('/').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("passport needs BLACK/WHITE/FACES, got {s:?}")));
    }
    let cts = parts
        .iter()
        .map(|p| {
            p.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .ok()
                        .filter(|&k| k > 0)
                        .ok_or_else(|| Error::Parse(format!("bad cycle length {x:?}")))
                })
                .collect::<Result<Vec<usize>>>()
                .map(CycleType::new)
        })
        .collect::<Result<Vec<CycleType>>>()?;
    let [b, w, f]: [CycleType; 3] = cts.try_into().expect("three parts");
    if b.sum() != w.sum() || b.sum() != f.sum() {
        return Err(Error::InconsistentPassport(format!(
            "cycle types sum to {}, {}, {}",
            b.sum(),
            w.sum(),
            f.sum()
        )));
    }
    Passport::from_cycle_types(b, w, f)
}

fn fraction_value(f: &RationalFraction) -> Value {
    serde_json::from_str(&f.to_json()).expect("fraction json")
}

fn candidate_value(c: &BelyiCandidate, variables: Option<&[String]>, input: Option<&Dessin>, exact: bool) -> Value {
    let mut v = json!({
        "fraction": fraction_value(&c.fraction),
        "residual": c.residual,
        "separation": c.separation,
        "points": to_value(&c.points),
    });
    match variables {
        Some(names) => {
            v["unknowns"] = names
                .iter()
                .zip(&c.unknowns)
                .map(|(n, z)| json!({ "name": n, "value": complex(*z) }))
                .collect();
        }
        None => v["unknowns"] = c.unknowns.iter().map(|z| complex(*z)).collect(),
    }
    if let Ok(m) = monodromy(&c.fraction) {
        let md = m.dessin();
        if let Some(d) = input {
            v["matches_input"] = json!(d.is_isomorphic(&md).is_some());
        }
        v["monodromy"] = to_value(&md);
    }
    if exact {
        v["exact"] = match snap_rational(&c.fraction, DEFAULT_DENOMINATOR_BOUND, 1e-8) {
            Some(e) => json!({
                "fraction": serde_json::from_str::<Value>(&e.to_json()).expect("fraction json"),
                "belyi": is_belyi_exact(&e),
            }),
            None => Value::Null,
        };
    }
    v
}

fn belyi(cmd: BelyiCommand, g: &GlobalOpts) -> Result<Output> {
    match cmd {
        BelyiCommand::Solve {
            dessin,
            passport,
            pin_black,
            pin_white,
            infinity_face,
            exact,
            show_system,
        } => {
            let input = dessin.as_deref().map(read_dessin).transpose()?;
            let p = match (&input, passport) {
                (Some(d), _) => d.passport()?,
                (None, Some(s)) => parse_passport(&s)?,
                (None, None) => return Err(Error::Parse("give a dessin file or --passport".into())),
            };
            let sys = setup_system_with(
                &p,
                &SystemOptions {
                    pin_black,
                    pin_white,
                    infinity_face,
                    with_eta: false,
                },
            )?;
            if show_system {
                return Ok(Output::Raw(sys.display()));
            }
            let opts = solve_options(g);
            let report = solve_system(&sys, &opts)?;
            Ok(Output::Document(json!({
                "seed": g.seed,
                "passport": to_value(&p),
                "variables": sys.variables,
                "starts": report.starts,
                "rounds": report.rounds,
                "converged": report.converged,
                "rejected": report.rejected,
                "count": report.candidates.len(),
                "candidates": report
                    .candidates
                    .iter()
                    .map(|c| candidate_value(c, Some(&sys.variables), input.as_ref(), exact))
                    .collect::<Vec<_>>(),
            })))
        }
        BelyiCommand::Tree { dessin } => {
            let d = read_dessin(&dessin)?;
            let c = tree_shabat(&d, &solve_options(g))?;
            let mut v = json!({ "seed": g.seed });
            if let (Value::Object(head), Value::Object(rest)) = (&mut v, candidate_value(&c, None, Some(&d), false)) {
                head.extend(rest);
            }
            Ok(Output::Document(v))
        }
        BelyiCommand::Monodromy { fraction } => {
            let m = monodromy(&read_fraction(&fraction)?)?;
            Ok(Output::Document(json!({
                "dessin": to_value(&m.dessin()),
                "base": complex(m.base),
                "fiber": m.fiber.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
            })))
        }
        BelyiCommand::Verify { dessin, fraction } => {
            let v = verify(&read_dessin(&dessin)?, &read_fraction(&fraction)?)?;
            Ok(Output::Document(json!({
                "isomorphic": v.isomorphic,
                "monodromy": to_value(&v.monodromy),
                "witness": v.witness.as_ref().map(one_based),
            })))
        }
        BelyiCommand::Svg { fraction, samples, size } => Ok(Output::Raw(svg(&read_fraction(&fraction)?, samples, size)?)),
    }
}
