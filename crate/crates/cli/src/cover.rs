use std::collections::BTreeMap;
use std::path::Path;

use iel_core::coversys::{
    build_sl, classify_cover_system, members, parse_structure, representation_iso, truth_set,
    CoverSystem, CoverSystemFile, FiniteLocale, Structure,
};
use iel_core::parser::parse_formula;
use serde_json::{json, Value};

use crate::report::{read, CliError, Report, Status};

/// Largest number of letter assignments `cover truth` will try.
const MAX_ASSIGNMENTS: u128 = 1_000_000;

fn load(file: &Path) -> Result<Structure, CliError> {
    parse_structure(&read(file)?).map_err(|e| CliError::parse(file, e))
}

/// The cover system a structure denotes: itself, the system under a
/// model, or the one built from a locale.
fn system_of(file: &Path, s: Structure) -> Result<CoverSystem, CliError> {
    match s {
        Structure::System(s) => Ok(s),
        Structure::Model(m) => Ok(m.system),
        Structure::Locale(l) => build_sl(&l).map_err(|e| CliError::parse(file, e)),
    }
}

fn locale_of(file: &Path, s: Structure) -> Result<FiniteLocale, CliError> {
    match s {
        Structure::Locale(l) => Ok(l),
        _ => Err(CliError::Usage(format!(
            "{} is not a locale file",
            file.display()
        ))),
    }
}

fn set_labels(s: &CoverSystem, set: u64) -> Vec<String> {
    members(set)
        .map(|x| s.poset().label(x).to_string())
        .collect()
}

fn braces(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

pub fn verify(file: &Path) -> Result<Report, CliError> {
    let s = system_of(file, load(file)?)?;
    let mut checks = vec![
        ("existence", s.check_existence()),
        ("transitivity", s.check_transitivity()),
        ("refinement", s.check_refinement()),
        ("localic", s.check_localic()),
        ("strict", s.check_strict()),
    ];
    let modal = s.relation().is_some();
    if modal {
        checks.push(("confluence", s.check_confluence()));
        checks.push(("modal localisation", s.check_modal_localisation()));
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    for (name, c) in &checks {
        match c {
            Ok(()) => text.push_str(&format!("{name}: ok\n")),
            Err(f) => text.push_str(&format!("{name}: fails at {}\n", f.witness)),
        }
        rows.push(json!({
            "condition": name,
            "holds": c.is_ok(),
            "witness": c.as_ref().err().map(|f| f.witness.clone()),
        }));
    }
    let holds = |names: &[&str]| {
        checks
            .iter()
            .filter(|(n, _)| names.contains(n))
            .all(|(_, c)| c.is_ok())
    };
    let strict = holds(&["existence", "transitivity", "refinement", "strict"]);
    let verdict = |b: bool| if b { "ok" } else { "fails" };
    text.push_str(&format!("strict localic: {}\n", verdict(strict)));
    let mut v = json!({ "points": s.len(), "checks": rows, "strict": strict });
    let mut ok = strict;
    if modal {
        let m = strict && holds(&["confluence", "modal localisation"]);
        text.push_str(&format!("modal: {}\n", verdict(m)));
        v["modal"] = json!(m);
        ok = m;
    }
    Ok(Report::new(
        if ok { Status::Ok } else { Status::Refuted },
        text,
        v,
    ))
}

pub fn classify(file: &Path) -> Result<Report, CliError> {
    let s = system_of(file, load(file)?)?;
    let flags = classify_cover_system(&s);
    let v = serde_json::to_value(&flags).expect("flags serialize");
    let mut text = String::new();
    if let Value::Object(map) = &v {
        // fixed order, matching the struct
        for key in [
            "cover",
            "localic",
            "strict",
            "modal",
            "prenuclear",
            "mult_prenuclear",
            "mult_prenuclear_intended",
            "iel",
            "iel_intended",
            "variants_disagree",
        ] {
            text.push_str(&format!("{key}={}\n", map[key]));
        }
    }
    for f in &flags.failures {
        text.push_str(&format!("witness {f}\n"));
    }
    Ok(Report::new(Status::Ok, text, v))
}

pub fn represent(file: &Path) -> Result<Report, CliError> {
    let l = locale_of(file, load(file)?)?;
    let r = representation_iso(&l).map_err(|e| CliError::parse(file, e))?;
    let mut text = String::new();
    for (a, image) in &r.table {
        text.push_str(&format!("{a} -> {}\n", braces(image)));
    }
    if r.holds() {
        text.push_str(&format!(
            "iso confirmed: {} elements, {} propositions\n",
            r.elements, r.propositions
        ));
    } else {
        for f in &r.failures {
            text.push_str(&format!("failure: {f}\n"));
        }
    }
    let v = serde_json::to_value(&r).expect("report serializes");
    Ok(Report::new(
        if r.holds() {
            Status::Ok
        } else {
            Status::Refuted
        },
        text,
        v,
    ))
}

pub fn build(file: &Path) -> Result<Report, CliError> {
    let l = locale_of(file, load(file)?)?;
    let s = build_sl(&l).map_err(|e| CliError::parse(file, e))?;
    let out = CoverSystemFile::from_system(&s);
    let text = serde_json::to_string_pretty(&out).expect("files serialize") + "\n";
    let v = json!({ "system": out });
    Ok(Report::new(Status::Ok, text, v))
}

/// Truth set of a closed formula. In a predicate model it uses the file's
/// valuation; on a system or locale every assignment of propositions to
/// the letters is tried, and the first one where the formula fails to
/// hold everywhere is reported.
pub fn truth(file: &Path, src: &str) -> Result<Report, CliError> {
    let phi = parse_formula(src).map_err(|e| CliError::parse(Path::new("<formula>"), e))?;
    if let Some(x) = phi.free_individuals().into_iter().next() {
        return Err(CliError::Usage(format!(
            "individual variable `{x}` is free"
        )));
    }
    let structure = load(file)?;
    if let Structure::Model(m) = &structure {
        let set = m
            .truth_set(&phi, &BTreeMap::new())
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let holds = set == m.system.all();
        let points = set_labels(&m.system, set);
        let text = format!(
            "{phi}: {}\n{}\n",
            braces(&points),
            if holds {
                "holds everywhere"
            } else {
                "does not hold everywhere"
            }
        );
        let v = json!({ "formula": phi.to_string(), "truth_set": points, "holds": holds });
        return Ok(Report::new(
            if holds { Status::Ok } else { Status::Refuted },
            text,
            v,
        ));
    }
    if !phi.is_propositional() {
        return Err(CliError::Usage(
            "predicates need a model file with a valuation".into(),
        ));
    }
    let s = system_of(file, structure)?;
    let props = s
        .propositions()
        .map_err(|e| CliError::Resource(e.to_string()))?;
    let letters = phi.letters();
    let total = (props.len() as u128).pow(letters.len() as u32);
    if total > MAX_ASSIGNMENTS {
        return Err(CliError::Resource(format!(
            "{total} assignments needed, limit is {MAX_ASSIGNMENTS}"
        )));
    }
    let mut choice = vec![0usize; letters.len()];
    for _ in 0..total {
        let assignment: BTreeMap<String, u64> = letters
            .iter()
            .zip(&choice)
            .map(|(p, &i)| (p.clone(), props[i]))
            .collect();
        let set = truth_set(&s, 0, &assignment, &phi, &BTreeMap::new())
            .map_err(|e| CliError::Usage(e.to_string()))?;
        if set != s.all() {
            let mut text = format!(
                "{phi}: fails{}\n",
                if letters.is_empty() { "" } else { " under" }
            );
            let mut shown = serde_json::Map::new();
            for (p, &a) in &assignment {
                text.push_str(&format!("  {p} = {}\n", braces(&set_labels(&s, a))));
                shown.insert(p.clone(), json!(set_labels(&s, a)));
            }
            text.push_str(&format!("truth set {}\n", braces(&set_labels(&s, set))));
            let v = json!({
                "formula": phi.to_string(),
                "holds": false,
                "assignment": shown,
                "truth_set": set_labels(&s, set),
            });
            return Ok(Report::new(Status::Refuted, text, v));
        }
        for c in choice.iter_mut() {
            *c += 1;
            if *c < props.len() {
                break;
            }
            *c = 0;
        }
    }
    let text = format!("{phi}: holds everywhere under every assignment ({total} tried)\n");
    let v = json!({ "formula": phi.to_string(), "holds": true, "assignments": total as u64 });
    Ok(Report::new(Status::Ok, text, v))
}
