//! Text renderings of command outputs. JSON goes through serde directly.

use std::fmt::Write as _;

use qdeform_core::report::CheckKind;
use qdeform_core::{GramReport, SpectrumTable, VerificationReport};

use crate::commands::{EffectiveLOutput, HarmonicOutput, IntegralOutput};

fn csv_from_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_sci(v: Option<f64>) -> String {
    v.map(|x| format!("{x:>14.8}"))
        .unwrap_or_else(|| format!("{:>14}", "-"))
}

pub fn verify_csv(r: &VerificationReport) -> String {
    let checks = r.checks.iter().map(|c| {
        let kind = match c.kind {
            CheckKind::Identity => "identity",
            CheckKind::Informational => "informational",
        };
        vec![
            c.relation.clone(),
            kind.to_string(),
            String::new(),
            c.q.to_string(),
            c.lmax.to_string(),
            c.max_residual.to_string(),
            String::new(),
            String::new(),
            c.passed.to_string(),
        ]
    });
    let comparisons = r.comparisons.iter().map(|c| {
        vec![
            c.relation.clone(),
            "comparison".to_string(),
            c.label.clone(),
            c.q.to_string(),
            r.lmax.to_string(),
            String::new(),
            c.computed.to_string(),
            c.reference.to_string(),
            c.agrees.to_string(),
        ]
    });
    csv_from_rows(
        &[
            "relation",
            "kind",
            "label",
            "q",
            "lmax",
            "max_residual",
            "computed",
            "reference",
            "pass",
        ],
        checks.chain(comparisons),
    )
}

pub fn verify_pretty(r: &VerificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "relation suite at q = {}, lmax = {}, tolerance = {:e}",
        r.q, r.lmax, r.tolerance
    );
    let _ = writeln!(s, "\nidentities");
    for c in r.checks.iter().filter(|c| c.kind == CheckKind::Identity) {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "  {tag}  {:<48} {:>10.3e}", c.relation, c.max_residual);
    }
    let _ = writeln!(s, "\ninformational checks (never fail the run)");
    for c in r
        .checks
        .iter()
        .filter(|c| c.kind == CheckKind::Informational)
    {
        let tag = if c.passed { "holds" } else { "fails" };
        let _ = writeln!(s, "  {tag} {:<48} {:>10.3e}", c.relation, c.max_residual);
        if let Some(note) = &c.note {
            let _ = writeln!(s, "        {note}");
        }
    }
    let _ = writeln!(s, "\ncomputed vs printed or closed form (informational)");
    let _ = writeln!(
        s,
        "  {:<36} {:<22} {:>16} {:>16}  agree",
        "relation", "label", "computed", "reference"
    );
    for c in &r.comparisons {
        let _ = writeln!(
            s,
            "  {:<36} {:<22} {:>16.10} {:>16.10}  {}",
            c.relation,
            c.label,
            c.computed,
            c.reference,
            if c.agrees { "yes" } else { "no" }
        );
    }
    let total = r
        .checks
        .iter()
        .filter(|c| c.kind == CheckKind::Identity)
        .count();
    let failed = r.failures().count();
    let _ = writeln!(s, "\n{} of {total} identities hold", total - failed);
    s
}

pub fn spectrum_pretty(t: &SpectrumTable) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} levels at q = {} ({:?} mode)",
        t.potential, t.q, t.mode
    );
    let _ = writeln!(
        s,
        "{:>3} {:>3} {:>12} {:>14} {:>14} {:>14}",
        "n", "l", "L_eff", "E_closed", "E_numeric", "abs_diff"
    );
    for r in &t.rows {
        let diff = r
            .abs_diff
            .map(|x| format!("{x:>14.3e}"))
            .unwrap_or_else(|| format!("{:>14}", "-"));
        let _ = writeln!(
            s,
            "{:>3} {:>3} {:>12.8} {} {} {diff}",
            r.n,
            r.l,
            r.l_eff,
            opt_sci(r.e_closed),
            opt_sci(r.e_numeric)
        );
    }
    s
}

pub fn harmonic_csv(h: &HarmonicOutput) -> String {
    csv_from_rows(
        &["l", "m", "q", "power", "coeff", "norm", "sign"],
        h.powers.iter().zip(&h.coeffs).map(|(p, c)| {
            vec![
                h.l.to_string(),
                h.m.to_string(),
                h.q.to_string(),
                p.to_string(),
                c.to_string(),
                h.norm.to_string(),
                h.sign.to_string(),
            ]
        }),
    )
}

pub fn harmonic_pretty(h: &HarmonicOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Y_{{{},{}}} at q = {}", h.l, h.m, h.q);
    let _ = writeln!(
        s,
        "normalization {}{}",
        if h.sign < 0 { "-" } else { "" },
        h.norm
    );
    for (p, c) in h.powers.iter().zip(&h.coeffs) {
        let _ = writeln!(s, "  x0^{p}: {c}");
    }
    s
}

pub fn integral_csv(o: &IntegralOutput) -> String {
    csv_from_rows(
        &[
            "q",
            "n",
            "value",
            "closed_form",
            "abs_diff",
            "K",
            "q_eff",
            "tail_bound",
        ],
        [vec![
            o.q.to_string(),
            o.n.to_string(),
            o.value.to_string(),
            o.closed_form.to_string(),
            o.abs_diff.to_string(),
            o.k.to_string(),
            o.q_eff.to_string(),
            o.tail_bound.to_string(),
        ]],
    )
}

pub fn integral_pretty(o: &IntegralOutput) -> String {
    format!(
        "integral of x0^{} over (0, 1) at q = {}\n  value       {}\n  1/[n+1]     {}\n  abs diff    {:e}\n  rule        {:?}, {} nodes, q_eff = {}, tail bound {:e}\n",
        o.n, o.q, o.value, o.closed_form, o.abs_diff, o.rule, o.k, o.q_eff, o.tail_bound
    )
}

pub fn gram_csv(g: &GramReport) -> String {
    csv_from_rows(
        &[
            "q",
            "lmax",
            "K",
            "max_offdiag",
            "max_diag_dev",
            "normalization",
            "printed_max_diag_dev",
        ],
        [vec![
            g.q.to_string(),
            g.lmax.to_string(),
            g.k.to_string(),
            g.max_offdiag.to_string(),
            g.max_diag_dev.to_string(),
            format!("{:?}", g.normalization).to_lowercase(),
            opt(g.printed_max_diag_dev),
        ]],
    )
}

pub fn gram_pretty(g: &GramReport) -> String {
    let mut s = format!(
        "Gram matrix of Y_lm, 0 <= m <= l <= {}, at q = {}\n  rule             {:?}, {} nodes\n  max off-diagonal {:e}\n  max |diag - 1|   {:e}\n  normalization    {:?}\n",
        g.lmax, g.q, g.rule, g.k, g.max_offdiag, g.max_diag_dev, g.normalization
    );
    if let Some(dev) = g.printed_max_diag_dev {
        let _ = writeln!(
            s,
            "  closed-form norms missed the identity by {dev:e} and were refit"
        );
    }
    s
}

pub fn effective_l_csv(o: &EffectiveLOutput) -> String {
    csv_from_rows(
        &["q", "l", "X", "L_eff"],
        o.rows.iter().map(|r| {
            vec![
                o.q.to_string(),
                r.l.to_string(),
                r.x.to_string(),
                r.l_eff.to_string(),
            ]
        }),
    )
}

pub fn effective_l_pretty(o: &EffectiveLOutput) -> String {
    let mut s = format!(
        "effective angular momentum at q = {}\n{:>3} {:>16} {:>16}\n",
        o.q, "l", "X", "L_eff"
    );
    for r in &o.rows {
        let _ = writeln!(s, "{:>3} {:>16.12} {:>16.12}", r.l, r.x, r.l_eff);
    }
    s
}
