use std::path::Path;

use iel_core::metalang::{ml_infer, translate_context, translate_term, translate_type};
use iel_core::parser::{
    parse_context, parse_term_with_spans, print_ml_term, print_ml_type, SpanTree,
};
use iel_core::reduce::{normalize, ReduceError, Trace};
use iel_core::typecheck::{infer, TypingError};
use iel_core::{Context, Term};
use serde_json::{json, Value};

use crate::report::{read, CliError, Report, Status};

struct Source {
    term: Term,
    spans: SpanTree,
    ctx: Context,
}

fn load(file: &Path, context: Option<&Path>) -> Result<Source, CliError> {
    let (term, spans) =
        parse_term_with_spans(&read(file)?).map_err(|e| CliError::parse(file, e))?;
    let ctx = match context {
        Some(c) => parse_context(&read(c)?).map_err(|e| CliError::parse(c, e))?,
        None => Context::empty(),
    };
    Ok(Source { term, spans, ctx })
}

/// `file:line:col: error: ...` for the subterm the error points at.
fn diagnostic(file: &Path, spans: &SpanTree, e: &TypingError) -> (String, Value) {
    let span = spans.get(&e.path);
    let text = format!("{}:{span}: error: {e}\n", file.display());
    let v = json!({
        "error": e.kind.to_string(),
        "subterm": e.at.to_string(),
        "path": e.path,
        "span": span,
    });
    (text, v)
}

pub fn check(file: &Path, context: Option<&Path>) -> Result<Report, CliError> {
    let src = load(file, context)?;
    Ok(match infer(&src.ctx, &src.term) {
        Ok(ty) => Report::new(
            Status::Ok,
            format!("{ty}\n"),
            json!({ "type": ty.to_string() }),
        ),
        Err(e) => {
            let (text, v) = diagnostic(file, &src.spans, &e);
            Report::new(Status::Refuted, text, v)
        }
    })
}

fn trace_json(trace: &Trace) -> Value {
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .zip(trace.reducts())
        .map(|((_, site), after)| {
            json!({
                "rule": site.rule.to_string(),
                "path": site.path,
                "term": after.to_string(),
            })
        })
        .collect();
    Value::Array(steps)
}

pub fn norm(
    file: &Path,
    context: Option<&Path>,
    trace: bool,
    fuel: usize,
) -> Result<Report, CliError> {
    let src = load(file, context)?;
    if let Err(e) = infer(&src.ctx, &src.term) {
        let (text, _) = diagnostic(file, &src.spans, &e);
        eprint!("warning: term is not typable, reducing anyway\n{text}");
    }
    Ok(match normalize(&src.term, fuel) {
        Ok((nf, tr)) => {
            let mut text = if trace { tr.render() } else { String::new() };
            text.push_str(&format!("{nf}\n"));
            let mut v = json!({ "normal_form": nf.to_string(), "steps": tr.len() });
            if trace {
                v["trace"] = trace_json(&tr);
            }
            Report::new(Status::Ok, text, v)
        }
        Err(ReduceError::FuelExhausted { fuel, partial }) => {
            let text = format!(
                "{}no normal form within {fuel} steps; last term:\n{}\n",
                partial.render(),
                partial.last
            );
            let v = json!({
                "fuel": fuel,
                "last": partial.last.to_string(),
                "trace": trace_json(&partial),
            });
            Report::new(Status::Exhausted, text, v)
        }
        Err(e) => return Err(CliError::Resource(e.to_string())),
    })
}

pub fn translate(file: &Path, context: Option<&Path>, check: bool) -> Result<Report, CliError> {
    let src = load(file, context)?;
    let ml = translate_term(&src.term);
    let printed = print_ml_term(&ml);
    let mut text = format!("{printed}\n");
    let mut v = json!({ "translation": printed });
    if !check {
        return Ok(Report::new(Status::Ok, text, v));
    }
    let ty = match infer(&src.ctx, &src.term) {
        Ok(ty) => ty,
        Err(e) => {
            let (diag, d) = diagnostic(file, &src.spans, &e);
            text.push_str(&diag);
            v["source_error"] = d;
            return Ok(Report::new(Status::Refuted, text, v));
        }
    };
    let expected = translate_type(&ty);
    let status = match ml_infer(&translate_context(&src.ctx), &ml) {
        Ok(found) if found == expected => {
            text.push_str(&format!("type: {}\ncheck: ok\n", print_ml_type(&found)));
            v["type"] = json!(print_ml_type(&found));
            Status::Ok
        }
        Ok(found) => {
            text.push_str(&format!(
                "type: {}\ncheck: expected {}\n",
                print_ml_type(&found),
                print_ml_type(&expected)
            ));
            v["type"] = json!(print_ml_type(&found));
            v["expected"] = json!(print_ml_type(&expected));
            Status::Refuted
        }
        Err(e) => {
            text.push_str(&format!("check: translation is ill-typed: {e}\n"));
            v["expected"] = json!(print_ml_type(&expected));
            v["error"] = json!(e.to_string());
            Status::Refuted
        }
    };
    v["check"] = json!(status == Status::Ok);
    Ok(Report::new(status, text, v))
}
