//! The four verbs.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use qil_core::classifier::{is_nqmi_on, minimal_profile_on, QuasiProfile};
use qil_core::constructions::{catalog_example_sized, CATALOG_IDS, DEFAULT_SHIFT_DIM};
use qil_core::decomposition::{block_decompose, spectral_report, verify_block_form_on};
use qil_core::theorems::{
    self, catalog_ids_for, catalog_scenario, run_all, run_random_batch, tally, Outcome, TheoremId, TheoremVerdict,
};
use qil_core::ToleranceProfile;
use serde_json::{json, Value};

use crate::document::{parse_documents, MatrixDocument};
use crate::report::{digest, Report};
use crate::{Cli, Command, Format, EXIT_FAILURE, EXIT_OK};

/// Largest `m`, `n` or power accepted on the command line.
const MAX_ORDER: usize = 32;
const MAX_COUNT: usize = 100_000;
/// Text output lists every verdict up to this many.
const DETAIL_LIMIT: usize = 24;

pub fn dispatch(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if !(cli.eps_rel.is_finite() && cli.eps_rel > 0.0) {
        bail!("--eps-rel must be a positive finite number, got {}", cli.eps_rel);
    }
    let tol = ToleranceProfile::with_eps(cli.eps_rel);
    match &cli.command {
        Command::Classify { input, m_max, n_max } => {
            let docs = load(input.as_deref(), stdin)?;
            classify(cli, &tol, &docs, *m_max, *n_max, out, err)
        }
        Command::Decompose { input, n, m } => {
            let docs = load(input.as_deref(), stdin)?;
            decompose(cli, &tol, &docs, *n, *m, out)
        }
        Command::Verify {
            theorem,
            catalog,
            k,
            count,
        } => verify(cli, &tol, theorem, catalog.as_deref(), *k, *count, out, err),
        Command::Example { id, dim } => example(id, *dim, out),
    }
}

fn load(input: Option<&Path>, stdin: &mut dyn Read) -> Result<Vec<MatrixDocument>> {
    let text = match input {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?
        }
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).context("cannot read standard input")?;
            s
        }
    };
    parse_documents(&text)
}

fn docs_digest(command: &str, params: String, docs: &[MatrixDocument]) -> Result<String> {
    let mut parts = vec![command.to_string(), params];
    for d in docs {
        parts.push(serde_json::to_string(d)?);
    }
    Ok(digest(parts))
}

fn check_order(name: &str, value: usize, min: usize) -> Result<()> {
    if !(min..=MAX_ORDER).contains(&value) {
        bail!("{name} must lie in {min}..={MAX_ORDER}, got {value}");
    }
    Ok(())
}

/// Truncated operators are trusted only for `m + n <= interior_margin`.
fn check_window(doc: &MatrixDocument, index: usize, m: usize, n: usize) -> Result<()> {
    if let Some(margin) = doc.interior_margin {
        if m + n > margin {
            bail!(
                "{}: m + n = {} exceeds interior_margin {margin}; lower the orders or use a larger truncation",
                doc.label(index),
                m + n
            );
        }
    }
    Ok(())
}

/// Defects up to `(m, n)` involve `||T^j||^2` for `j <= m + n`; refuse input
/// whose powers leave the f64 range.
fn check_powers(t: &qil_core::Matrix, label: &str, max_power: usize) -> Result<()> {
    let cache = qil_core::defect::DefectCache::new(t, max_power);
    if let Some(j) = (0..=max_power).find(|&j| !cache.power_norm(j).powi(2).is_finite()) {
        bail!("{label}: ||T^{j}||^2 overflows; rescale the input or lower the orders");
    }
    Ok(())
}

fn emit(out: &mut dyn Write, report: &Report) -> Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn fmt_staircase(s: &[Option<usize>]) -> String {
    s.iter()
        .enumerate()
        .map(|(n, m)| match m {
            Some(m) => format!("n={n}: m={m}"),
            None => format!("n={n}: none"),
        })
        .collect::<Vec<_>>()
        .join("  ")
}

fn summary(p: &QuasiProfile) -> String {
    match p.staircase.first() {
        Some(&Some(m)) if p.staircase.iter().all(|&s| s == Some(m)) => {
            let strict = (0..=p.n_max).all(|n| p.is_strict(m, n));
            format!("m(n)={m} for all n{}", if strict { ", strict" } else { "" })
        }
        _ => match p.staircase.iter().position(Option::is_some) {
            Some(n) => format!("first accepted at n={n}"),
            None => format!("not n-quasi-m-isometric for m <= {}, n <= {}", p.m_max, p.n_max),
        },
    }
}

fn classify(
    cli: &Cli,
    tol: &ToleranceProfile,
    docs: &[MatrixDocument],
    m_max: usize,
    n_max: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    check_order("--m-max", m_max, 1)?;
    check_order("--n-max", n_max, 0)?;
    for (i, d) in docs.iter().enumerate() {
        check_window(d, i, m_max, n_max)?;
    }
    let mut verdicts = Vec::new();
    for (i, doc) in docs.iter().enumerate() {
        let t = doc.matrix()?;
        check_powers(&t, &doc.label(i), m_max + n_max)?;
        let p = minimal_profile_on(&t, m_max, n_max, tol, doc.window());
        let label = doc.label(i);
        let warnings: Vec<String> = doc.discrepancy.iter().map(|d| format!("{label}: {d}")).collect();
        for w in &warnings {
            writeln!(err, "warning: {w}")?;
        }
        if cli.format == Format::Text {
            writeln!(out, "== {label} (dim {}, eps_rel {:e}) ==", doc.dim, tol.eps_rel)?;
            if let Some(w) = doc.window() {
                writeln!(out, "window: leading {} basis vectors", w.size)?;
            }
            writeln!(out, "staircase: {}", fmt_staircase(&p.staircase))?;
            writeln!(out, "summary: {}", summary(&p))?;
            let pairs: Vec<String> = p.strict_pairs.iter().map(|(m, n)| format!("({m},{n})")).collect();
            writeln!(out, "strict pairs: {}", if pairs.is_empty() { "none".into() } else { pairs.join(" ") })?;
            if p.band_cells > 0 {
                writeln!(out, "undecided cells (hysteresis band): {}", p.band_cells)?;
            }
            writeln!(out, "normalized residuals:")?;
            let header: String = (0..=n_max).map(|n| format!("{:>12}", format!("n={n}"))).collect();
            writeln!(out, "      {header}")?;
            for m in 0..=m_max {
                let row: String = (0..=n_max).map(|n| format!("{:>12.3e}", p.residual(m, n))).collect();
                writeln!(out, "  m={m:<2}{row}")?;
            }
            for w in &warnings {
                writeln!(out, "warning: {w}")?;
            }
        }
        verdicts.push(json!({
            "name": label,
            "dim": doc.dim,
            "window": doc.window().map(|w| w.size),
            "eps_rel": tol.eps_rel,
            "profile": p,
            "monotone": p.is_monotone(),
            "summary": summary(&p),
            "warnings": warnings,
        }));
    }
    if cli.format == Format::Json {
        let d = docs_digest("classify", format!("m_max={m_max} n_max={n_max} eps={:e}", tol.eps_rel), docs)?;
        emit(out, &Report::new("classify", d, verdicts))?;
    }
    Ok(EXIT_OK)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn decompose(
    cli: &Cli,
    tol: &ToleranceProfile,
    docs: &[MatrixDocument],
    n: usize,
    m: usize,
    out: &mut dyn Write,
) -> Result<i32> {
    check_order("-m", m, 1)?;
    check_order("-n", n, 0)?;
    for (i, d) in docs.iter().enumerate() {
        check_window(d, i, m, n)?;
    }
    let mut failed = false;
    let mut verdicts = Vec::new();
    for (i, doc) in docs.iter().enumerate() {
        let t = doc.matrix()?;
        check_powers(&t, &doc.label(i), m + n)?;
        let window = doc.window();
        let label = doc.label(i);
        let d = block_decompose(&t, n, tol);
        let check = verify_block_form_on(&d, m, tol, window);
        let (direct, rep) = is_nqmi_on(&t, m, n, tol, window);
        let decided = tol.accept(rep.normalized) || tol.decided_reject(rep.normalized);
        let consistent = !decided || direct == check.holds();
        // A truncated shift is nilpotent; its spectrum says nothing about
        // the operator it approximates.
        let spectral = if window.is_none() {
            Some(spectral_report(&t, n, tol)?)
        } else {
            None
        };
        let spectral_ok = spectral
            .as_ref()
            .is_none_or(|s| s.union_check && (!direct || s.t1_unimodular_check));
        failed |= !consistent || !spectral_ok;

        if cli.format == Format::Text {
            writeln!(out, "== {label} (dim {}), n={n}, m={m} ==", doc.dim)?;
            if let Some(w) = window {
                writeln!(out, "window: leading {} basis vectors", w.size)?;
            }
            let r = d.rank();
            writeln!(out, "blocks: r = {r} (T1 {r}x{r}), d - r = {} (T3)", d.dim() - r)?;
            writeln!(
                out,
                "T1 {m}-isometric: {} (residual {:.3e})",
                yes_no(check.t1_m_isometric),
                check.t1_residual
            )?;
            writeln!(out, "T3^{n} = 0: {} (residual {:.3e})", yes_no(check.t3_nilpotent_n), check.t3_residual)?;
            writeln!(out, "lower block residual: {:.3e}", check.lower_residual)?;
            writeln!(
                out,
                "direct check ({m},{n}): {} (normalized {:.3e})",
                if direct { "accepted" } else { "rejected" },
                rep.normalized
            )?;
            let agreement = if !decided {
                "undecided (hysteresis band)"
            } else if consistent {
                if direct {
                    "consistent acceptance"
                } else {
                    "consistent rejection"
                }
            } else {
                "INCONSISTENT"
            };
            writeln!(out, "block form vs direct: {agreement}")?;
            match &spectral {
                Some(s) => {
                    writeln!(
                        out,
                        "spectrum union sigma(T) = sigma(T1) + zeros: {} (radius {:.3e})",
                        yes_no(s.union_check),
                        s.radius
                    )?;
                    let unimodular = if direct { yes_no(s.t1_unimodular_check) } else { "n/a" };
                    writeln!(out, "sigma(T1) on the unit circle: {unimodular}")?;
                }
                None => writeln!(out, "spectral checks: skipped for a truncated operator")?,
            }
        }
        verdicts.push(json!({
            "name": label,
            "dim": doc.dim,
            "n": n,
            "m": m,
            "window": window.map(|w| w.size),
            "rank": d.rank(),
            "t1_m_isometric": check.t1_m_isometric,
            "t1_residual": check.t1_residual,
            "t3_nilpotent_n": check.t3_nilpotent_n,
            "t3_residual": check.t3_residual,
            "lower_residual": check.lower_residual,
            "degenerate": check.degenerate,
            "direct": rep,
            "consistent": consistent,
            "spectrum": spectral.as_ref().map(|s| json!({
                "union_check": s.union_check,
                "t1_unimodular_check": s.t1_unimodular_check,
                "t1_min_singular": s.t1_min_singular,
                "radius": s.radius,
                "sigma_t": s.sigma_t.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "sigma_t1": s.sigma_t1.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            })),
        }));
    }
    if cli.format == Format::Json {
        let d = docs_digest("decompose", format!("n={n} m={m} eps={:e}", tol.eps_rel), docs)?;
        emit(out, &Report::new("decompose", d, verdicts))?;
    }
    Ok(if failed { EXIT_FAILURE } else { EXIT_OK })
}

#[allow(clippy::too_many_arguments)]
fn verify(
    cli: &Cli,
    tol: &ToleranceProfile,
    theorem: &str,
    catalog: Option<&str>,
    k: Option<usize>,
    count: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    if count == 0 || count > MAX_COUNT {
        bail!("--count must lie in 1..={MAX_COUNT}");
    }
    if let Some(k) = k {
        check_order("--k", k, 1)?;
    }
    let verdicts: Vec<TheoremVerdict> = match (theorem, catalog) {
        ("all", None) => run_all(count, cli.seed, tol),
        ("all", Some(_)) => bail!("`all` takes no --catalog; use a theorem id or `catalog`"),
        (id, cat) => {
            let id: TheoremId = id.parse().map_err(|e: String| {
                let known: Vec<&str> = TheoremId::ALL.iter().map(|t| t.as_str()).collect();
                anyhow::anyhow!("{e}; known: all, {}", known.join(", "))
            })?;
            match cat {
                None if id == TheoremId::Catalog => theorems::catalog_verdicts(tol),
                None => run_random_batch(id, count, cli.seed, tol),
                Some(cat) => match catalog_scenario(id, cat, k, tol) {
                    Some(v) => v,
                    None => bail!(
                        "no `{id}` scenario for catalog id `{cat}`; available: {}",
                        catalog_ids_for(id).join(", ")
                    ),
                },
            }
        }
    };
    let t = tally(&verdicts);
    for v in &verdicts {
        for note in v.notes.iter().filter(|n| n.starts_with("flagged example")) {
            writeln!(err, "warning: {}: {note}", v.theorem_id)?;
        }
    }
    match cli.format {
        Format::Text => {
            let detailed = verdicts.len() <= DETAIL_LIMIT;
            for v in verdicts.iter().filter(|v| detailed || v.is_failure()) {
                write_verdict(out, v)?;
            }
            writeln!(out, "{:<26}{:>6}{:>6}{:>9}", "theorem", "pass", "fail", "vacuous")?;
            for id in TheoremId::ALL {
                let rows: Vec<TheoremVerdict> =
                    verdicts.iter().filter(|v| v.theorem_id == id.as_str()).cloned().collect();
                if rows.is_empty() {
                    continue;
                }
                let r = tally(&rows);
                writeln!(out, "{:<26}{:>6}{:>6}{:>9}", id.as_str(), r.pass, r.fail, r.vacuous)?;
            }
            writeln!(out, "total: {} pass, {} fail, {} vacuous (seed {})", t.pass, t.fail, t.vacuous, cli.seed)?;
        }
        Format::Json => {
            let params = format!(
                "theorem={theorem} catalog={catalog:?} k={k:?} count={count} seed={} eps={:e}",
                cli.seed, tol.eps_rel
            );
            let values = verdicts.iter().map(serde_json::to_value).collect::<Result<Vec<Value>, _>>()?;
            emit(out, &Report::new("verify", digest([params]), values))?;
        }
    }
    Ok(if t.fail > 0 { EXIT_FAILURE } else { EXIT_OK })
}

fn write_verdict(out: &mut dyn Write, v: &TheoremVerdict) -> Result<()> {
    let tag = match v.outcome {
        Outcome::Pass => "pass",
        Outcome::Fail => "FAIL",
        Outcome::Vacuous => "vacuous",
    };
    writeln!(
        out,
        "[{tag}] {} | {} | {} | residual {:.3e}",
        v.theorem_id, v.instance_digest, v.claim, v.worst_residual
    )?;
    for n in &v.notes {
        writeln!(out, "    {n}")?;
    }
    Ok(())
}

fn example(id: &str, dim: Option<usize>, out: &mut dyn Write) -> Result<i32> {
    if id == "list" {
        for id in CATALOG_IDS {
            writeln!(out, "{id}")?;
        }
        return Ok(EXIT_OK);
    }
    if !CATALOG_IDS.contains(&id) {
        bail!("unknown example `{id}`; known: {}", CATALOG_IDS.join(", "));
    }
    if dim.is_some() && !id.starts_with("shift_") {
        bail!("--dim applies to shift examples only");
    }
    let entry = catalog_example_sized(id, dim.unwrap_or(DEFAULT_SHIFT_DIM))?;
    for doc in MatrixDocument::from_catalog(&entry) {
        writeln!(out, "{}", serde_json::to_string(&doc)?)?;
    }
    Ok(EXIT_OK)
}
