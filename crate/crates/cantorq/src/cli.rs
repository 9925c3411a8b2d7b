//! Command execution and output rendering for the command-line front end.
//!
//! Every command produces an envelope `{command, parameters, exact, results}`
//! in JSON mode, a flat table in CSV mode, and a human-readable summary in
//! text mode; the genealogy command additionally renders DOT. Output is
//! deterministic for fixed inputs: JSON keys are sorted, set listings follow
//! the canonical lexicographic order, and rationals always serialize as
//! `{num, den, approx}`.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::distortion::{self, Codebook};
use crate::engine::{self, GenealogyGraph};
use crate::error::Error;
use crate::oracle::{self, DpMode, StructureCheck};
use crate::rational::{approx, parse_rational, JsonRational, Rational};
use crate::word_measure::{self, IfsParams, Word};

/// Process exit code for a completed command.
pub const EXIT_OK: i32 = 0;
/// Process exit code for invalid input (also used by argument parsing).
pub const EXIT_INPUT: i32 = 2;
/// Process exit code for a failed invariant or oracle check.
pub const EXIT_VIOLATION: i32 = 3;
/// Process exit code for an exhausted resource limit.
pub const EXIT_LIMIT: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

/// Rendered output plus the exit code the process should report.
#[derive(Debug)]
pub struct CommandOutput {
    pub text: String,
    pub code: i32,
}

impl CommandOutput {
    fn ok(text: String) -> CommandOutput {
        CommandOutput {
            text,
            code: EXIT_OK,
        }
    }
}

/// Exit code for an error surfaced by any command.
pub fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::BudgetExhausted { .. } | Error::EnumerationLimit { .. } => EXIT_LIMIT,
        _ => EXIT_INPUT,
    }
}

fn rational_value(r: &Rational) -> Value {
    serde_json::to_value(JsonRational(r.clone())).expect("rational serializes")
}

fn envelope(command: &str, parameters: Value, exact: bool, results: Value) -> String {
    let value = json!({
        "command": command,
        "parameters": parameters,
        "exact": exact,
        "results": results,
    });
    serde_json::to_string_pretty(&value).expect("envelope serializes")
}

fn display_rational(r: &Rational) -> String {
    format!("{r} (~{})", approx(r))
}

fn csv_rational(r: &Rational) -> String {
    format!("{r},{}", approx(r))
}

fn words_text(words: &[Word]) -> String {
    let inner: Vec<String> = words.iter().map(|w| w.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

fn words_json(words: &[Word]) -> Value {
    Value::Array(
        words
            .iter()
            .map(|w| Value::String(w.to_string()))
            .collect(),
    )
}

fn codebook_json(points: &[Rational]) -> Value {
    Value::Array(points.iter().map(rational_value).collect())
}

fn codebook_text(points: &[Rational]) -> String {
    let inner: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    format!("[{}]", inner.join(", "))
}

/// Inclusive `a..b` range, or a single stage.
pub fn parse_range(n: Option<u64>, range: Option<&str>) -> Result<(u64, u64), Error> {
    match (n, range) {
        (Some(n), None) => Ok((n, n)),
        (None, Some(text)) => {
            let (a, b) = text
                .split_once("..")
                .ok_or_else(|| Error::BadRange(format!("{text:?} (expected A..B)")))?;
            let lo: u64 = a
                .trim()
                .parse()
                .map_err(|_| Error::BadRange(format!("{text:?}")))?;
            let hi: u64 = b
                .trim()
                .parse()
                .map_err(|_| Error::BadRange(format!("{text:?}")))?;
            if lo < 1 || lo > hi {
                return Err(Error::BadRange(format!("{text:?} (need 1 <= A <= B)")));
            }
            Ok((lo, hi))
        }
        _ => Err(Error::BadRange(
            "exactly one of --n and --range is required".into(),
        )),
    }
}

pub fn run_moments(format: Format) -> Result<CommandOutput, Error> {
    let m = word_measure::moments();
    let text = match format {
        Format::Json => envelope(
            "moments",
            json!({}),
            true,
            json!({
                "mean": rational_value(&m.mean),
                "variance": rational_value(&m.variance),
                "second_moment": rational_value(&m.second_moment),
            }),
        ),
        Format::Csv => format!(
            "mean,mean_approx,variance,variance_approx,second_moment,second_moment_approx\n{},{},{}",
            csv_rational(&m.mean),
            csv_rational(&m.variance),
            csv_rational(&m.second_moment)
        ),
        _ => format!(
            "mean          = {}\nvariance      = {}\nsecond moment = {}",
            display_rational(&m.mean),
            display_rational(&m.variance),
            display_rational(&m.second_moment)
        ),
    };
    Ok(CommandOutput::ok(text))
}

pub fn run_vn(n: Option<u64>, range: Option<&str>, format: Format) -> Result<CommandOutput, Error> {
    let (lo, hi) = parse_range(n, range)?;
    let table = engine::error_table(hi)?;
    let rows: Vec<(u64, &Rational)> = (lo..=hi).map(|k| (k, &table[(k - 1) as usize])).collect();
    let text = match format {
        Format::Json => envelope(
            "vn",
            json!({"from": lo, "to": hi}),
            true,
            json!({
                "values": rows
                    .iter()
                    .map(|(k, v)| json!({"n": k, "error": rational_value(v)}))
                    .collect::<Vec<_>>(),
            }),
        ),
        Format::Csv => {
            let mut out = String::from("n,error,approx");
            for (k, v) in &rows {
                out.push_str(&format!("\n{k},{}", csv_rational(v)));
            }
            out
        }
        _ => rows
            .iter()
            .map(|(k, v)| format!("V_{k} = {}", display_rational(v)))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok(CommandOutput::ok(text))
}

pub fn run_count(
    n: Option<u64>,
    range: Option<&str>,
    format: Format,
) -> Result<CommandOutput, Error> {
    let (lo, hi) = parse_range(n, range)?;
    let mut rows = Vec::new();
    for k in lo..=hi {
        rows.push((k, engine::count_optimal_sets(k)?));
    }
    let text = match format {
        Format::Json => envelope(
            "count",
            json!({"from": lo, "to": hi}),
            true,
            json!({
                "counts": rows
                    .iter()
                    .map(|(k, c)| json!({"n": k, "count": c.to_string()}))
                    .collect::<Vec<_>>(),
            }),
        ),
        Format::Csv => {
            let mut out = String::from("n,count");
            for (k, c) in &rows {
                out.push_str(&format!("\n{k},{c}"));
            }
            out
        }
        _ => rows
            .iter()
            .map(|(k, c)| format!("card(C_{k}) = {c}"))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok(CommandOutput::ok(text))
}

pub fn run_sets(n: u64, enumerate_limit: u64, format: Format) -> Result<CommandOutput, Error> {
    let canonical = engine::canonical_optimal_words(n)?;
    let codebook = engine::codebook_from_words(&canonical)?;
    let error = engine::optimal_error(n)?;
    let family = engine::enumerate_optimal_sets(n, enumerate_limit)?;
    let text = match format {
        Format::Json => envelope(
            "sets",
            json!({"n": n, "enumerate_limit": enumerate_limit}),
            true,
            json!({
                "n": n,
                "count": family.count.to_string(),
                "error": rational_value(&error),
                "canonical": {
                    "words": words_json(&canonical),
                    "codebook": codebook_json(&codebook),
                },
                "sets": family
                    .sets
                    .as_ref()
                    .map(|sets| sets.iter().map(|s| words_json(s)).collect::<Vec<_>>()),
            }),
        ),
        Format::Csv => {
            let mut out = String::from("index,words,error,approx");
            match &family.sets {
                Some(sets) => {
                    for (i, set) in sets.iter().enumerate() {
                        let joined: Vec<String> = set.iter().map(|w| w.to_string()).collect();
                        out.push_str(&format!(
                            "\n{},{},{}",
                            i + 1,
                            joined.join(" "),
                            csv_rational(&error)
                        ));
                    }
                }
                None => {
                    let joined: Vec<String> =
                        canonical.iter().map(|w| w.to_string()).collect();
                    out.push_str(&format!(
                        "\ncanonical,{},{}",
                        joined.join(" "),
                        csv_rational(&error)
                    ));
                }
            }
            out
        }
        _ => {
            let mut out = vec![
                format!("stage n = {n}: {} optimal set(s)", family.count),
                format!("error V_{n} = {}", display_rational(&error)),
                format!("canonical words    = {}", words_text(&canonical)),
                format!("canonical codebook = {}", codebook_text(&codebook)),
            ];
            match &family.sets {
                Some(sets) => {
                    for (i, set) in sets.iter().enumerate() {
                        out.push(format!(
                            "{} = {}",
                            set_label(n, i, sets.len()),
                            words_text(set)
                        ));
                    }
                }
                None => out.push(format!(
                    "(count exceeds --enumerate-limit {enumerate_limit}; listing only the canonical set)"
                )),
            }
            out.join("\n")
        }
    };
    Ok(CommandOutput::ok(text))
}

pub fn run_evaluate(
    source: &str,
    codebook_json_text: &str,
    gap_text: &str,
    budget: u64,
    format: Format,
) -> Result<CommandOutput, Error> {
    let gap = parse_rational(gap_text)?;
    let inputs: Vec<crate::rational::RationalInput> = serde_json::from_str(codebook_json_text)
        .map_err(|e| Error::BadRational(format!("codebook file: {e}")))?;
    let points = inputs
        .iter()
        .map(|i| i.to_rational())
        .collect::<Result<Vec<_>, _>>()?;
    let codebook = Codebook::new(points)?;
    let estimate = distortion::evaluate_codebook(&codebook, &gap, budget)?;
    let width = &estimate.upper - &estimate.lower;
    let text = match format {
        Format::Json => envelope(
            "evaluate",
            json!({"codebook": source, "gap": gap_text, "budget": budget}),
            true,
            json!({
                "points": codebook_json(codebook.points()),
                "lower": rational_value(&estimate.lower),
                "upper": rational_value(&estimate.upper),
                "width": rational_value(&width),
                "cylinders_expanded": estimate.cylinders_expanded,
                "exact_value": estimate.is_exact(),
            }),
        ),
        Format::Csv => format!(
            "lower,lower_approx,upper,upper_approx,width,width_approx,expanded,exact\n{},{},{},{},{}",
            csv_rational(&estimate.lower),
            csv_rational(&estimate.upper),
            csv_rational(&width),
            estimate.cylinders_expanded,
            estimate.is_exact()
        ),
        _ => {
            let mut out = vec![
                format!("codebook = {}", codebook_text(codebook.points())),
                format!("lower    = {}", display_rational(&estimate.lower)),
                format!("upper    = {}", display_rational(&estimate.upper)),
                format!("width    = {}", display_rational(&width)),
                format!("expanded {} cylinder(s)", estimate.cylinders_expanded),
            ];
            if estimate.is_exact() {
                out.push("bounds coincide: the distortion is exact".into());
            }
            out.join("\n")
        }
    };
    Ok(CommandOutput::ok(text))
}

fn set_label(n: u64, index: usize, total: usize) -> String {
    if total == 1 {
        format!("α_{{{n}}}")
    } else {
        format!("α_{{{n},{}}}", index + 1)
    }
}

fn node_id(n: u64, index: usize) -> String {
    format!("n{n}_{}", index + 1)
}

fn genealogy_dot(graph: &GenealogyGraph) -> String {
    let mut out = String::from("digraph genealogy {\n  rankdir=LR;\n");
    for stage in &graph.stages {
        for (i, _) in stage.sets.iter().enumerate() {
            out.push_str(&format!(
                "  {} [label=\"{}\"];\n",
                node_id(stage.n, i),
                set_label(stage.n, i, stage.sets.len())
            ));
        }
    }
    for edge in &graph.edges {
        out.push_str(&format!(
            "  {} -> {};\n",
            node_id(edge.parent_n, edge.from),
            node_id(edge.parent_n + 1, edge.to)
        ));
    }
    out.push('}');
    out
}

pub fn run_genealogy(
    from: u64,
    to: u64,
    enumerate_limit: u64,
    format: Format,
) -> Result<CommandOutput, Error> {
    let graph = engine::genealogy(from, to, enumerate_limit)?;
    let text = match format {
        Format::Dot => genealogy_dot(&graph),
        Format::Json => {
            let stages: Vec<Value> = graph
                .stages
                .iter()
                .map(|stage| {
                    json!({
                        "n": stage.n,
                        "sets": stage
                            .sets
                            .iter()
                            .enumerate()
                            .map(|(i, set)| {
                                json!({
                                    "id": node_id(stage.n, i),
                                    "label": set_label(stage.n, i, stage.sets.len()),
                                    "words": words_json(set),
                                })
                            })
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            let edges: Vec<Value> = graph
                .edges
                .iter()
                .map(|e| {
                    json!({
                        "from": node_id(e.parent_n, e.from),
                        "to": node_id(e.parent_n + 1, e.to),
                    })
                })
                .collect();
            envelope(
                "genealogy",
                json!({"from": from, "to": to, "enumerate_limit": enumerate_limit}),
                true,
                json!({"stages": stages, "edges": edges}),
            )
        }
        Format::Csv => {
            let mut out = String::from("parent,child");
            for e in &graph.edges {
                out.push_str(&format!(
                    "\n{},{}",
                    node_id(e.parent_n, e.from),
                    node_id(e.parent_n + 1, e.to)
                ));
            }
            out
        }
        Format::Text => {
            let mut out = Vec::new();
            for stage in &graph.stages {
                out.push(format!("stage {}: {} set(s)", stage.n, stage.sets.len()));
                for (i, set) in stage.sets.iter().enumerate() {
                    out.push(format!(
                        "  {} = {}",
                        set_label(stage.n, i, stage.sets.len()),
                        words_text(set)
                    ));
                }
            }
            let labels: std::collections::HashMap<u64, usize> = graph
                .stages
                .iter()
                .map(|s| (s.n, s.sets.len()))
                .collect();
            for e in &graph.edges {
                out.push(format!(
                    "{} -> {}",
                    set_label(e.parent_n, e.from, labels[&e.parent_n]),
                    set_label(e.parent_n + 1, e.to, labels[&(e.parent_n + 1)])
                ));
            }
            out.join("\n")
        }
    };
    Ok(CommandOutput::ok(text))
}

fn structure_json(structure: &StructureCheck) -> Value {
    match structure {
        StructureCheck::Match {
            set_index,
            canonical,
        } => json!({"kind": "match", "set_index": set_index, "canonical": canonical}),
        StructureCheck::Mismatch => json!({"kind": "mismatch"}),
        StructureCheck::Skipped { reason } => json!({"kind": "skipped", "reason": reason}),
    }
}

fn structure_text(structure: &StructureCheck) -> String {
    match structure {
        StructureCheck::Match {
            canonical: true, ..
        } => "codes lie in the canonical optimal cylinders".into(),
        StructureCheck::Match { set_index, .. } => format!(
            "codes lie in the cylinders of optimal set #{}",
            set_index + 1
        ),
        StructureCheck::Mismatch => "codes do not match any enumerated optimal set".into(),
        StructureCheck::Skipped { reason } => format!("structure check skipped: {reason}"),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn run_oracle(
    n: u64,
    depth: u32,
    mode: DpMode,
    p1: Option<&str>,
    r1: Option<&str>,
    r2: Option<&str>,
    format: Format,
) -> Result<CommandOutput, Error> {
    match (p1, r1, r2) {
        (None, None, None) => run_oracle_standard(n, depth, mode, format),
        (Some(p1), Some(r1), Some(r2)) => run_oracle_heuristic(n, depth, mode, p1, r1, r2, format),
        _ => Err(Error::BadParams(
            "general-parameter mode needs all of --p1, --r1, --r2".into(),
        )),
    }
}

fn mode_name(mode: DpMode) -> &'static str {
    match mode {
        DpMode::Exact => "exact",
        DpMode::Fast => "fast",
    }
}

fn run_oracle_standard(
    n: u64,
    depth: u32,
    mode: DpMode,
    format: Format,
) -> Result<CommandOutput, Error> {
    let result = oracle::oracle_check(n, depth, mode)?;
    let passed = result.passed();
    let difference = &result.engine_error - &result.discrete_error;
    let status = if passed { "PASS" } else { "FAIL" };
    let text = match format {
        Format::Json => envelope(
            "oracle",
            json!({"n": n, "depth": depth, "mode": mode_name(mode)}),
            result.tolerance.is_zero(),
            json!({
                "n": result.n,
                "depth": result.depth,
                "engine_error": rational_value(&result.engine_error),
                "discrete_error": rational_value(&result.discrete_error),
                "difference": rational_value(&difference),
                "bound": rational_value(&result.bound),
                "tolerance": rational_value(&result.tolerance),
                "codebook": codebook_json(&result.codebook),
                "bracket_ok": result.bracket_ok,
                "structure": structure_json(&result.structure),
                "status": status,
            }),
        ),
        Format::Csv => format!(
            "n,depth,engine_error,engine_approx,discrete_error,discrete_approx,bound,bound_approx,bracket_ok,status\n{},{},{},{},{},{},{status}",
            result.n,
            result.depth,
            csv_rational(&result.engine_error),
            csv_rational(&result.discrete_error),
            csv_rational(&result.bound),
            result.bracket_ok
        ),
        _ => [
            format!("oracle check: n = {}, depth = {} ({})", n, depth, mode_name(mode)),
            format!("engine error   = {}", display_rational(&result.engine_error)),
            format!("discrete error = {}", display_rational(&result.discrete_error)),
            format!("difference     = {}", display_rational(&difference)),
            format!("bound          = {}", display_rational(&result.bound)),
            format!(
                "bracket 0 <= difference <= bound: {}",
                if result.bracket_ok { "holds" } else { "VIOLATED" }
            ),
            structure_text(&result.structure),
            status.to_string(),
        ]
        .join("\n"),
    };
    Ok(CommandOutput {
        text,
        code: if passed { EXIT_OK } else { EXIT_VIOLATION },
    })
}

#[allow(clippy::too_many_arguments)]
fn run_oracle_heuristic(
    n: u64,
    depth: u32,
    mode: DpMode,
    p1: &str,
    r1: &str,
    r2: &str,
    format: Format,
) -> Result<CommandOutput, Error> {
    let params = IfsParams::general(
        parse_rational(p1)?,
        parse_rational(r1)?,
        parse_rational(r2)?,
    )?;
    let report = oracle::heuristic_check(params, n, depth, mode)?;
    let text = match format {
        Format::Json => envelope(
            "oracle",
            json!({
                "n": n, "depth": depth, "mode": mode_name(mode),
                "p1": p1, "r1": r1, "r2": r2,
            }),
            false,
            json!({
                "label": "HEURISTIC",
                "note": "general parameters: greedy splitting is not certified optimal",
                "greedy_upper": rational_value(&report.greedy_upper),
                "greedy_words": words_json(&report.greedy_words),
                "dp_error": rational_value(&report.dp_error),
                "dp_codebook": codebook_json(&report.dp_codebook),
                "discretization_bound": rational_value(&report.discretization_bound),
            }),
        ),
        Format::Csv => format!(
            "label,n,depth,greedy_upper,greedy_approx,dp_error,dp_approx,bound,bound_approx\nHEURISTIC,{},{},{},{},{}",
            report.n,
            report.depth,
            csv_rational(&report.greedy_upper),
            csv_rational(&report.dp_error),
            csv_rational(&report.discretization_bound)
        ),
        _ => [
            format!(
                "HEURISTIC general-parameter run (p1 = {p1}, r1 = {r1}, r2 = {r2}); no optimality certificate"
            ),
            format!("greedy cut upper bound = {}", display_rational(&report.greedy_upper)),
            format!("greedy words           = {}", words_text(&report.greedy_words)),
            format!("discrete optimum       = {}", display_rational(&report.dp_error)),
            format!("within-cell bound      = {}", display_rational(&report.discretization_bound)),
        ]
        .join("\n"),
    };
    Ok(CommandOutput::ok(text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range(Some(5), None).unwrap(), (5, 5));
        assert_eq!(parse_range(None, Some("9..13")).unwrap(), (9, 13));
        assert!(parse_range(None, Some("13..9")).is_err());
        assert!(parse_range(None, Some("0..4")).is_err());
        assert!(parse_range(None, Some("abc")).is_err());
        assert!(parse_range(None, None).is_err());
        assert!(parse_range(Some(2), Some("1..3")).is_err());
    }

    #[test]
    fn moments_json_envelope() {
        let out = run_moments(Format::Json).unwrap();
        let value: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(value["command"], "moments");
        assert_eq!(value["exact"], true);
        assert_eq!(value["results"]["mean"]["num"], "2");
        assert_eq!(value["results"]["mean"]["den"], "3");
        assert_eq!(value["results"]["variance"]["num"], "16");
        assert_eq!(value["results"]["variance"]["den"], "153");
        assert_eq!(value["results"]["second_moment"]["num"], "28");
    }

    #[test]
    fn vn_csv_row() {
        let out = run_vn(Some(2), None, Format::Csv).unwrap();
        assert!(out.text.starts_with("n,error,approx\n"));
        assert!(out.text.contains("2,13/612,"));
    }

    #[test]
    fn count_single() {
        let out = run_count(Some(12), None, Format::Text).unwrap();
        assert_eq!(out.text, "card(C_12) = 1");
    }

    #[test]
    fn sets_text_lists_codebook() {
        let out = run_sets(3, 10, Format::Text).unwrap();
        assert!(out.text.contains("{1, 21, 22}"));
        assert!(out.text.contains("[1/6, 7/12, 11/12]"));
        assert!(out.text.contains("55/9792"));
    }

    #[test]
    fn sets_respects_limit() {
        let out = run_sets(70, 10, Format::Text).unwrap();
        assert!(out.text.contains("6435"));
        assert!(out.text.contains("listing only the canonical set"));
    }

    #[test]
    fn evaluate_single_point() {
        let out = run_evaluate(
            "inline",
            "[{\"num\": \"2\", \"den\": \"3\"}]",
            "1/1000000000000",
            1000,
            Format::Json,
        )
        .unwrap();
        let value: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(value["results"]["lower"]["num"], "16");
        assert_eq!(value["results"]["lower"]["den"], "153");
        assert_eq!(value["results"]["exact_value"], true);
    }

    #[test]
    fn evaluate_rejects_bad_codebook() {
        assert!(run_evaluate("inline", "[]", "1/100", 10, Format::Text).is_err());
        assert!(run_evaluate("inline", "nonsense", "1/100", 10, Format::Text).is_err());
        assert!(run_evaluate("inline", "[\"1/2\",\"1/3\"]", "1/100", 10, Format::Text).is_err());
    }

    #[test]
    fn genealogy_dot_9_to_12() {
        let out = run_genealogy(9, 12, 100, Format::Dot).unwrap();
        assert!(out.text.starts_with("digraph genealogy {"));
        assert!(out.text.contains("n9_1 [label=\"α_{9}\"];"));
        assert!(out.text.contains("n10_2 [label=\"α_{10,2}\"];"));
        assert!(out.text.contains("n9_1 -> n10_3;"));
        assert!(out.text.contains("n11_3 -> n12_1;"));
        // 8 nodes and 12 edges in total.
        assert_eq!(out.text.matches("label=").count(), 8);
        assert_eq!(out.text.matches(" -> ").count(), 12);
    }

    #[test]
    fn oracle_passes_at_small_depth() {
        let out = run_oracle(2, 6, DpMode::Exact, None, None, None, Format::Json).unwrap();
        assert_eq!(out.code, EXIT_OK);
        let value: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(value["results"]["status"], "PASS");
        assert_eq!(value["results"]["bracket_ok"], true);
    }

    #[test]
    fn oracle_heuristic_is_labeled() {
        let out = run_oracle(
            3,
            6,
            DpMode::Exact,
            Some("1/2"),
            Some("1/3"),
            Some("1/3"),
            Format::Text,
        )
        .unwrap();
        assert!(out.text.starts_with("HEURISTIC"));
        assert!(run_oracle(3, 6, DpMode::Exact, Some("1/2"), None, None, Format::Text).is_err());
    }

    #[test]
    fn exit_codes_by_error_kind() {
        assert_eq!(
            exit_code_for(&Error::BudgetExhausted {
                budget: 1,
                gap: "g".into()
            }),
            EXIT_LIMIT
        );
        assert_eq!(
            exit_code_for(&Error::EnumerationLimit {
                n: 10,
                count: "3".into(),
                limit: 2
            }),
            EXIT_LIMIT
        );
        assert_eq!(exit_code_for(&Error::BadRange("x".into())), EXIT_INPUT);
    }
}
