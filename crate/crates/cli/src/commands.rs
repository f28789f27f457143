//! Command implementations; each returns its document and an exit code.

use std::sync::Arc;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::Result;
use colmez_core::conductors::{discriminant, discriminant_real_subfield};
use colmez_core::heights::{height_full, height_partial, verify_example_family};
use colmez_core::{field_characters, Evaluator, GaloisCMField};
use serde::Serialize;

use crate::report::{self, VerificationRun};
use crate::spec::TypeSpec;
use crate::suites::{run_suite, Suite, SuiteContext};

#[derive(Debug, Serialize)]
struct CharacterRow {
    index: usize,
    order: u64,
    conductor: u64,
    parity: &'static str,
}

#[derive(Debug, Serialize)]
struct FieldSummary {
    schema_version: u32,
    tool_version: String,
    field: String,
    modulus: u64,
    kernel: Vec<u64>,
    group_order: usize,
    g: usize,
    conjugation: u64,
    elements: Vec<u64>,
    discriminant: String,
    real_discriminant: String,
    characters: Vec<CharacterRow>,
}

pub fn cmd_field(field: &Arc<GaloisCMField>) -> Result<String> {
    let characters = field_characters(field)
        .iter()
        .enumerate()
        .map(|(index, chi)| CharacterRow {
            index,
            order: chi.order(),
            conductor: chi.conductor(),
            parity: if chi.is_odd() { "odd" } else { "even" },
        })
        .collect();
    let summary = FieldSummary {
        schema_version: report::SCHEMA_VERSION,
        tool_version: report::tool_version().to_string(),
        field: field.spec_string(),
        modulus: field.modulus(),
        kernel: field.kernel().iter().copied().collect(),
        group_order: field.order(),
        g: field.g(),
        conjugation: field.conjugation().rep(),
        elements: field.element_reps().to_vec(),
        discriminant: discriminant(field).to_string(),
        real_discriminant: discriminant_real_subfield(field).to_string(),
        characters,
    };
    Ok(serde_json::to_string_pretty(&summary)?)
}

#[derive(Debug, Serialize)]
struct HeightDocument {
    schema_version: u32,
    tool_version: String,
    #[serde(flatten)]
    report: colmez_core::HeightReport,
}

pub fn cmd_height(eval: &Evaluator, spec: &TypeSpec) -> Result<String> {
    let report = match spec {
        TypeSpec::Full(phi) => height_full(eval, phi)?,
        TypeSpec::Partial(phi) => height_partial(eval, phi)?,
    };
    let doc = HeightDocument {
        schema_version: report::SCHEMA_VERSION,
        tool_version: report::tool_version().to_string(),
        report,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn cmd_verify(suite: Suite, ctx: &SuiteContext, jobs: usize) -> Result<(String, i32)> {
    let started_unix_ms = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0);
    let clock = Instant::now();
    let checks = run_suite(suite, ctx, jobs);
    let run = VerificationRun::assemble(
        suite.to_string(),
        ctx.evaluator.convention(),
        ctx.tolerance,
        ctx.fields.iter().map(|f| f.spec_string()).collect(),
        checks,
        started_unix_ms,
        clock.elapsed().as_millis(),
    );
    let code = run.exit_code();
    Ok((serde_json::to_string_pretty(&run)?, code))
}

pub fn cmd_table(eval: &Evaluator, primes: &[u64]) -> Result<String> {
    let mut out = String::from(
        "p,discriminant,height_conjectural,example_rhs,delta,height_minus_quarter_logd\n",
    );
    if primes.is_empty() {
        return Ok(out);
    }
    let rows = verify_example_family(eval, primes)?;
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.p,
            row.discriminant,
            row.height_conjectural,
            row.example_rhs,
            row.delta,
            row.height_minus_quarter_logd
        ));
    }
    Ok(out)
}
