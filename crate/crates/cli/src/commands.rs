//! Subcommand implementations.

use std::process::ExitCode;

use anyhow::{Context, Result};
use serde_json::json;

use framekit::frame::SpectralSummary;
use framekit::generators::{self, Generated, GeneratorKind, GeneratorSpec};
use framekit::split;
use framekit::unconditionality::{
    self, exact_constant, khintchine_witness, randomized_constant, UnconditionalityEstimate,
};
use framekit::verify::{self, CheckContext, SuiteEntry, TheoremId, TheoremReport};

use crate::io::{emit, read_input, read_system, to_json_pretty, Input};
use crate::{Command, OutputFormat};

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Analyze {
            input,
            output,
            tol,
            format,
        } => analyze(&input, output.as_deref(), tol, format),
        Command::Constant {
            input,
            output,
            trials,
            seed,
            format,
        } => constant(&input, output.as_deref(), trials, seed, format),
        Command::Split {
            input,
            output,
            tol,
            max_iters,
            format,
        } => split_cmd(&input, output.as_deref(), tol, max_iters, format),
        Command::Witness {
            input,
            output,
            k1,
            format,
        } => witness(&input, output.as_deref(), k1, format),
        Command::Generate {
            kind,
            n,
            m,
            seed,
            scale,
            output,
        } => generate(&kind, n, m, seed, scale, output.as_deref()),
        Command::Verify {
            input,
            suite,
            seeds,
            n,
            m,
            k1,
            tol,
            trials,
            seed,
            output,
            format,
        } => verify_cmd(
            input.as_deref(),
            &suite,
            &seeds,
            n,
            m,
            k1,
            tol,
            trials,
            seed,
            output.as_deref(),
            format,
        ),
    }
}

fn analyze(input: &str, output: Option<&str>, tol: f64, format: OutputFormat) -> Result<ExitCode> {
    let text = match read_input(input)? {
        Input::Frame(frame) => {
            let summary = frame.spectral_summary(tol)?;
            match format {
                OutputFormat::Json => to_json_pretty(&summary)?,
                OutputFormat::Table => summary_table(&[("frame", &summary)]),
            }
        }
        Input::System(sys) => {
            let sx = sys.x().spectral_summary(tol)?;
            let sf = sys.f().spectral_summary(tol)?;
            match format {
                OutputFormat::Json => to_json_pretty(&json!({ "x": sx, "f": sf }))?,
                OutputFormat::Table => summary_table(&[("x", &sx), ("f", &sf)]),
            }
        }
    };
    emit(output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn summary_table(rows: &[(&str, &SpectralSummary)]) -> String {
    let mut out = format!(
        "{:<8} {:>12} {:>12} {:>12} {:>10} {:>10}\n",
        "frame", "bessel", "lower", "trace", "beta", "cond"
    );
    for (name, s) in rows {
        out.push_str(&format!(
            "{:<8} {:>12.6} {:>12.6} {:>12.6} {:>10} {:>10}\n",
            name,
            s.bessel,
            s.lower,
            s.trace,
            s.beta.map_or("-".into(), |b| format!("{b:.4}")),
            if s.lower > 0.0 {
                format!("{:.4}", s.condition_number())
            } else {
                "inf".into()
            },
        ));
    }
    out.trim_end().to_string()
}

fn constant(
    input: &str,
    output: Option<&str>,
    trials: usize,
    seed: u64,
    format: OutputFormat,
) -> Result<ExitCode> {
    let sys = read_system(input)?;
    let est = if sys.len() <= unconditionality::DEFAULT_ENUMERATION_CUTOFF {
        exact_constant(&sys)?
    } else {
        randomized_constant(&sys, trials, seed)?
    };
    let text = match format {
        OutputFormat::Json => to_json_pretty(&est)?,
        OutputFormat::Table => estimate_table(&est),
    };
    emit(output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn estimate_table(est: &UnconditionalityEstimate) -> String {
    format!(
        "value  {:.12}\nstatus {}\nsigns  {}",
        est.value,
        match est.status {
            unconditionality::EstimateStatus::Exact => "exact",
            unconditionality::EstimateStatus::LowerBound => "lower_bound",
        },
        est.witness_signs
            .signs()
            .iter()
            .map(|s| if *s > 0 { "+" } else { "-" })
            .collect::<String>(),
    )
}

fn split_cmd(
    input: &str,
    output: Option<&str>,
    tol: f64,
    max_iters: usize,
    format: OutputFormat,
) -> Result<ExitCode> {
    let sys = read_system(input)?;
    let explicit = split::explicit_split(&sys)?;
    let optimal = split::optimal_split(&sys, tol, max_iters)?;
    let unit = split::unit_split(&sys)?;
    let text = match format {
        OutputFormat::Json => to_json_pretty(&json!({
            "explicit": explicit,
            "optimal": optimal,
            "unit": unit,
        }))?,
        OutputFormat::Table => {
            let mut out = format!(
                "{:<10} {:>14} {:>14} {:>14} {:>10}\n",
                "method", "bessel_x", "bessel_f", "objective", "gap"
            );
            for r in [&explicit, &optimal, &unit] {
                out.push_str(&format!(
                    "{:<10} {:>14.8} {:>14.8} {:>14.8} {:>10.2e}\n",
                    format!("{:?}", r.method).to_lowercase(),
                    r.bessel_x,
                    r.bessel_f,
                    r.objective,
                    r.gap
                ));
            }
            out.trim_end().to_string()
        }
    };
    emit(output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn witness(input: &str, output: Option<&str>, k1: f64, format: OutputFormat) -> Result<ExitCode> {
    let sys = read_system(input)?;
    let w = khintchine_witness(&sys, k1)?;
    let text = match format {
        OutputFormat::Json => to_json_pretty(&w)?,
        OutputFormat::Table => format!(
            "certified_lower_bound {:.12}\nalpha {:.6}\nindex_set size {} of {}\ndelta {}\ngamma {}",
            w.certified_lower_bound,
            w.alpha,
            w.index_set.len(),
            sys.len(),
            sign_string(w.delta.signs()),
            sign_string(w.gamma.signs()),
        ),
    };
    emit(output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn sign_string(signs: &[i8]) -> String {
    signs
        .iter()
        .map(|s| if *s > 0 { "+" } else { "-" })
        .collect()
}

fn parse_kind(kind: &str) -> Result<GeneratorKind> {
    Ok(match kind {
        "harmonic_funtf" => GeneratorKind::HarmonicFuntf,
        "random_gaussian" => GeneratorKind::RandomGaussian,
        "example_basis_pair" => GeneratorKind::ExampleBasisPair,
        "tight_equinorm_pair" => GeneratorKind::TightEquinormPair,
        "replicated" => GeneratorKind::Replicated,
        other => anyhow::bail!(
            "unknown generator kind '{other}'; expected harmonic_funtf, random_gaussian, \
             example_basis_pair, tight_equinorm_pair, or replicated"
        ),
    })
}

fn generate(
    kind: &str,
    n: usize,
    m: Option<usize>,
    seed: u64,
    scale: f64,
    output: Option<&str>,
) -> Result<ExitCode> {
    let spec = GeneratorSpec {
        kind: parse_kind(kind)?,
        n,
        m: m.unwrap_or(n),
        seed,
        scale,
    };
    let text = match generators::generate(&spec)? {
        Generated::Frame(frame) => to_json_pretty(&frame)?,
        Generated::System(sys) => to_json_pretty(&sys)?,
    };
    emit(output, &text)?;
    Ok(ExitCode::SUCCESS)
}

/// Expands "3", "1,4,9", and "1..20" (inclusive) into a seed list.
fn parse_seeds(spec: &str) -> Result<Vec<u64>> {
    let spec = spec.trim();
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: u64 = lo.trim().parse().context("seed range start")?;
        let hi: u64 = hi.trim().parse().context("seed range end")?;
        anyhow::ensure!(lo <= hi, "empty seed range {spec}");
        return Ok((lo..=hi).collect());
    }
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .with_context(|| format!("seed '{s}'"))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn verify_cmd(
    input: Option<&str>,
    suite: &str,
    seeds: &str,
    n: usize,
    m: usize,
    k1: f64,
    tol: f64,
    trials: usize,
    seed: u64,
    output: Option<&str>,
    format: OutputFormat,
) -> Result<ExitCode> {
    let checks: Vec<TheoremId> = if suite == "all" {
        TheoremId::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    let seeds = parse_seeds(seeds)?;
    let ctx = CheckContext {
        tol,
        k1,
        trials,
        seed,
        ..CheckContext::default()
    };
    let entries = match input {
        Some(path) => {
            let sys = read_system(path)?;
            verify::run_on_system(&checks, &sys, &ctx)?
        }
        None => verify::run_suite(&checks, &seeds, n, m, &ctx)?,
    };

    let text = match format {
        OutputFormat::Json => entries
            .iter()
            .map(|e| serde_json::to_string(e).map_err(anyhow::Error::from))
            .collect::<Result<Vec<_>>>()?
            .join("\n"),
        OutputFormat::Table => {
            let mut out = format!("{:<6} {}\n", "seed", TheoremReport::table_header());
            for e in &entries {
                out.push_str(&format!(
                    "{:<6} {}\n",
                    e.seed.map_or("-".into(), |s| s.to_string()),
                    e.report.table_row()
                ));
            }
            out.push_str(&summary_line(&entries));
            out
        }
    };
    emit(output, &text)?;

    let failures = entries.iter().filter(|e| e.report.failed()).count();
    if failures > 0 {
        eprintln!("{failures} check(s) failed");
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn summary_line(entries: &[SuiteEntry]) -> String {
    let passed = entries.iter().filter(|e| e.report.passed()).count();
    let failed = entries.iter().filter(|e| e.report.failed()).count();
    let inconclusive = entries.len() - passed - failed;
    format!(
        "{} checks: {passed} passed, {failed} failed, {inconclusive} inconclusive",
        entries.len()
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_specs_parse() {
        assert_eq!(parse_seeds("5").unwrap(), vec![5]);
        assert_eq!(parse_seeds("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_seeds("2, 7, 11").unwrap(), vec![2, 7, 11]);
        assert!(parse_seeds("9..3").is_err());
        assert!(parse_seeds("x").is_err());
    }

    #[test]
    fn kinds_parse() {
        assert_eq!(
            parse_kind("harmonic_funtf").unwrap(),
            GeneratorKind::HarmonicFuntf
        );
        assert!(parse_kind("nope").is_err());
    }
}
