use qdeform_core::integrate::{self, QuadratureRule};
use qdeform_core::{harm, run_verification, schrod, Deformation, Result, SCHEMA_VERSION};
use serde::Serialize;

use crate::args::{Command, Format};
use crate::render;
use crate::Outcome;

#[derive(Debug, Serialize)]
pub struct HarmonicOutput {
    pub schema_version: u32,
    pub l: u32,
    pub m: i32,
    pub q: f64,
    /// Power of `x0` carried by each entry of `coeffs`.
    pub powers: Vec<u32>,
    pub coeffs: Vec<f64>,
    pub norm: f64,
    pub sign: i32,
}

#[derive(Debug, Serialize)]
pub struct IntegralOutput {
    pub schema_version: u32,
    pub q: f64,
    pub n: u32,
    pub value: f64,
    pub closed_form: f64,
    pub abs_diff: f64,
    pub rule: integrate::RuleKind,
    #[serde(rename = "K")]
    pub k: usize,
    pub q_eff: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Serialize)]
pub struct EffectiveLRow {
    pub l: u32,
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "L_eff")]
    pub l_eff: f64,
}

#[derive(Debug, Serialize)]
pub struct EffectiveLOutput {
    pub schema_version: u32,
    pub q: f64,
    pub rows: Vec<EffectiveLRow>,
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("outputs are always serializable");
    s.push('\n');
    s
}

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Verify { common, lmax } => {
            let d = Deformation::new(common.q)?;
            let report = run_verification(d, lmax, common.tolerance)?;
            let text = match common.format {
                Format::Json => json(&report),
                Format::Csv => render::verify_csv(&report),
                Format::Pretty => render::verify_pretty(&report),
            };
            Ok(Outcome {
                text,
                ok: report.all_passed(),
            })
        }
        Command::Spectrum {
            common,
            potential,
            nmax,
            lmax,
            mode,
        } => {
            let d = Deformation::new(common.q)?;
            let table = schrod::spectrum_table(d, potential.into(), nmax, lmax, mode.into())?;
            let text = match common.format {
                Format::Json => json(&table),
                Format::Csv => table.to_csv()?,
                Format::Pretty => render::spectrum_pretty(&table),
            };
            Ok(Outcome { text, ok: true })
        }
        Command::Harmonics { common, l, m } => {
            let d = Deformation::new(common.q)?;
            let spec = harm::harmonic_spec(d, l, m)?;
            let out = HarmonicOutput {
                schema_version: SCHEMA_VERSION,
                l,
                m,
                q: d.q(),
                powers: spec.powers().collect(),
                coeffs: spec.coeffs.clone(),
                norm: spec.norm,
                sign: spec.sign,
            };
            let text = match common.format {
                Format::Json => json(&out),
                Format::Csv => render::harmonic_csv(&out),
                Format::Pretty => render::harmonic_pretty(&out),
            };
            Ok(Outcome { text, ok: true })
        }
        Command::Integrate { common, n, lmax } => {
            let d = Deformation::new(common.q)?;
            match n {
                Some(n) => {
                    let rule = QuadratureRule::for_deformation(d);
                    let value = rule.positive(|x| x.powi(n as i32).into()).re;
                    let closed_form = 1.0 / d.qnum(n as i64 + 1);
                    let out = IntegralOutput {
                        schema_version: SCHEMA_VERSION,
                        q: d.q(),
                        n,
                        value,
                        closed_form,
                        abs_diff: (value - closed_form).abs(),
                        rule: rule.kind,
                        k: rule.depth,
                        q_eff: rule.q_eff,
                        tail_bound: rule.tail_bound,
                    };
                    let ok = out.abs_diff < common.tolerance;
                    let text = match common.format {
                        Format::Json => json(&out),
                        Format::Csv => render::integral_csv(&out),
                        Format::Pretty => render::integral_pretty(&out),
                    };
                    Ok(Outcome { text, ok })
                }
                None => {
                    let gram = integrate::gram_matrix(d, lmax, common.tolerance)?;
                    let ok = gram.max_deviation() < common.tolerance;
                    let text = match common.format {
                        Format::Json => json(&gram),
                        Format::Csv => render::gram_csv(&gram),
                        Format::Pretty => render::gram_pretty(&gram),
                    };
                    Ok(Outcome { text, ok })
                }
            }
        }
        Command::EffectiveL { common, lmax } => {
            let d = Deformation::new(common.q)?;
            let out = EffectiveLOutput {
                schema_version: SCHEMA_VERSION,
                q: d.q(),
                rows: (0..=lmax)
                    .map(|l| EffectiveLRow {
                        l,
                        x: schrod::angular_coefficient(d, l),
                        l_eff: schrod::effective_l(d, l),
                    })
                    .collect(),
            };
            let text = match common.format {
                Format::Json => json(&out),
                Format::Csv => render::effective_l_csv(&out),
                Format::Pretty => render::effective_l_pretty(&out),
            };
            Ok(Outcome { text, ok: true })
        }
    }
}
