//! Text, JSON and LaTeX renderings of command results.

use algcochain::scenarios::{BottResult, MqResult};
use algcochain::verify::{CheckStatus, RunReport};
use algcochain::Scalar;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Emit {
    Text,
    Json,
    Latex,
}

pub fn report_text(r: &RunReport) -> String {
    let mut out = format!(
        "suite {} seed {} max-degree {}\nconventions: beta sign {}, product sign {}, partial Leibniz sign {}, unit middle {}, thom heat sign {}\n",
        r.suite,
        r.seed,
        r.max_degree.map_or("default".to_owned(), |d| d.to_string()),
        r.conventions.beta_chain_sign,
        r.conventions.product_sign,
        r.conventions.partial_leibniz_sign,
        r.conventions.unit_middle,
        r.conventions.thom_heat_sign,
    );
    for c in &r.checks {
        let status = match c.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Unverified => "UNVERIFIED",
        };
        out.push_str(&format!("{:<10} {} cases={} residual={}", status, c.name, c.cases, c.residual));
        if let Some(d) = &c.detail {
            out.push_str(&format!(" [{}]", d));
        }
        out.push('\n');
    }
    let failed = r.failures().count();
    out.push_str(&format!("{} checks, {} failed, {} ms\n", r.checks.len(), failed, r.wall_time_ms));
    out
}

/// Bott output: the cochain and the pairing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BottOutput {
    pub schema: u32,
    pub psi: BottResult,
    pub pairing: Scalar,
    pub unnormalized_pairing: Scalar,
}

pub fn bott_text(b: &BottOutput, emit: Emit) -> String {
    match emit {
        Emit::Json => serde_json::to_string_pretty(b).expect("serializable"),
        Emit::Latex => format!("\\psi_1 = {}\n\\langle \\mathrm{{ch}}, \\psi\\rangle = {}\n", b.psi.latex, b.pairing.to_latex()),
        Emit::Text => format!(
            "psi_1 = {}\nclosed form (2it)^{}: {}\nlower degrees vanish: {}\npairing = {} (unnormalized {})\n",
            b.psi.text,
            b.psi.n,
            if b.psi.matches_closed_form {
                "matches".to_owned()
            } else {
                format!("differs, coefficient {} vs {}", b.psi.coefficient, b.psi.expected)
            },
            b.psi.lower_degrees_vanish,
            b.pairing,
            b.unnormalized_pairing
        ),
    }
}

/// Thom output: the supertrace, the determinant series and the comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThomOutput {
    pub schema: u32,
    pub result: MqResult,
    pub todd_series: String,
    pub todd_series_latex: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

pub fn thom_text(t: &ThomOutput, emit: Emit) -> String {
    let r = &t.result;
    match emit {
        Emit::Json => serde_json::to_string_pretty(t).expect("serializable"),
        Emit::Latex => {
            let mut s = format!("\\mathrm{{tr}}_s = {}\n\\det = {}\n", r.latex, t.todd_series_latex);
            if let Some(c) = &r.normalization {
                s.push_str(&format!("\\left(\\tfrac{{i}}{{2\\pi}}\\right)^{{{}}}\\int_{{\\mathrm{{fiber}}}} = {}\n", r.scenario.m, c.to_latex()));
            }
            s
        }
        Emit::Text => {
            let mut s = format!(
                "rank {} {} order {} sign {:?}\ntr_s = {}\n",
                r.scenario.m,
                if r.scenario.curved { "curved" } else { "flat" },
                r.scenario.order,
                r.sign,
                r.text
            );
            s.push_str(&format!("fiber integral = {}\n", r.fiber_integral.as_deref().unwrap_or("divergent")));
            if let Some(c) = &r.normalization {
                s.push_str(&format!("normalization (i/2pi)^{} * integral = {}\n", r.scenario.m, c));
            }
            s.push_str(&format!("det series = {}\n", t.todd_series));
            if let Some(td) = &r.todd {
                s.push_str(&format!(
                    "curved/flat = {}; matching exponent sign {:?}; unnormalized match {}\n",
                    td.ratio, td.matching_exponent_sign, td.matches_unnormalized
                ));
            }
            s.push_str(&format!("note: {}\n", r.note));
            s
        }
    }
}
