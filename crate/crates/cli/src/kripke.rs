use std::path::Path;

use iel_core::kripke::{
    countermodel, parse_frame_file, truth_set, KripkeError, Logic, Model, Search,
};
use iel_core::par::Strategy;
use iel_core::parser::parse_formula;
use iel_core::Formula;
use serde_json::json;

use crate::report::{read, CliError, Report, Status};

fn formula(src: &str) -> Result<Formula, CliError> {
    parse_formula(src).map_err(|e| CliError::parse(Path::new("<formula>"), e))
}

fn search(
    src: &str,
    logic: Logic,
    max_worlds: usize,
    guard: u64,
) -> Result<(Formula, Search), CliError> {
    let phi = formula(src)?;
    let outcome =
        countermodel(&phi, logic, max_worlds, guard, Strategy::default()).map_err(|e| match e {
            KripkeError::ResourceExceeded { .. } | KripkeError::WorldBound(_) => {
                CliError::Resource(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        })?;
    Ok((phi, outcome))
}

fn worlds(set: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|w| set & (1 << w) != 0).collect()
}

pub fn valid(src: &str, logic: Logic, max_worlds: usize, guard: u64) -> Result<Report, CliError> {
    let (phi, outcome) = search(src, logic, max_worlds, guard)?;
    Ok(match outcome {
        Search::ValidUpTo(n) => Report::new(
            Status::Ok,
            format!("{phi}: valid up to {n} worlds ({logic})\n"),
            json!({ "formula": phi.to_string(), "logic": logic.to_string(), "valid_up_to": n }),
        ),
        Search::Found(c) => {
            let model = c.model.render(Some(c.world));
            Report::new(
                Status::Refuted,
                format!("{phi}: countermodel ({logic})\n{model}"),
                json!({ "formula": phi.to_string(), "logic": logic.to_string(), "countermodel": model }),
            )
        }
    })
}

pub fn counter(src: &str, logic: Logic, max_worlds: usize, guard: u64) -> Result<Report, CliError> {
    let (phi, outcome) = search(src, logic, max_worlds, guard)?;
    Ok(match outcome {
        Search::Found(c) => {
            let model = c.model.render(Some(c.world));
            let v = json!({
                "formula": phi.to_string(),
                "logic": logic.to_string(),
                "worlds": c.model.frame.worlds(),
                "world": c.world,
                "countermodel": model,
            });
            Report::new(Status::Ok, model, v)
        }
        Search::ValidUpTo(n) => Report::new(
            Status::Refuted,
            format!("no countermodel to {phi} with at most {n} worlds ({logic})\n"),
            json!({ "formula": phi.to_string(), "logic": logic.to_string(), "valid_up_to": n }),
        ),
    })
}

/// Truth set of a formula in a model file. The verdict is about the
/// designated world when the file has one, and every world otherwise.
pub fn eval(file: &Path, src: &str, logic: Option<Logic>) -> Result<Report, CliError> {
    let ff = parse_frame_file(&read(file)?).map_err(|e| CliError::parse(file, e))?;
    if let Some(l) = logic {
        ff.frame
            .validate(l)
            .map_err(|e| CliError::parse(file, format!("not a frame of {l}: {e}")))?;
    }
    let n = ff.frame.worlds();
    let at = ff.at;
    let m = Model::new(ff.frame, ff.valuation).map_err(|e| CliError::parse(file, e))?;
    let phi = formula(src)?;
    let set = truth_set(&m, &phi).map_err(|e| CliError::Usage(e.to_string()))?;
    let forced = worlds(set, n);
    let holds = match at {
        Some(w) => set & (1 << w) != 0,
        None => set == m.frame.all(),
    };
    let listed: Vec<String> = forced.iter().map(|w| w.to_string()).collect();
    let mut text = format!("{phi}: forced at [{}]\n", listed.join(", "));
    if let Some(w) = at {
        text.push_str(&format!(
            "at {w}: {}\n",
            if holds { "forced" } else { "not forced" }
        ));
    }
    let v = json!({ "formula": phi.to_string(), "forced": forced, "at": at, "holds": holds });
    Ok(Report::new(
        if holds { Status::Ok } else { Status::Refuted },
        text,
        v,
    ))
}
