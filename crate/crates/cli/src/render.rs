//! Plain-text rendering. Lossy; JSON is the exchange format.

use std::fmt::Write;

use cmkit::report::{RelationReport, SurfaceReport, TableReport, VerdictReport};

use crate::commands::{status_name, BatchReport, Report};

fn surface(out: &mut String, s: &SurfaceReport) {
    let _ = writeln!(out, "group order  {}", s.group_order);
    let _ = writeln!(out, "signature    {}", s.signature);
    let _ = writeln!(out, "genus        {}", s.genus);
    let _ = writeln!(out, "vector       {}", s.vector.join(" "));
    let _ = writeln!(
        out,
        "\n{:>6} {:>6} {:>6}  subgroup",
        "order", "index", "genus"
    );
    for q in &s.quotients {
        let _ = writeln!(
            out,
            "{:>6} {:>6} {:>6}  <{}>",
            q.order,
            q.index,
            q.genus,
            q.subgroup_gens.join(", ")
        );
    }
}

fn relation(out: &mut String, r: &RelationReport) {
    let _ = write!(out, "relation     JX^{} ~", r.n);
    for (i, f) in r.factors.iter().enumerate() {
        let sep = if i == 0 { " " } else { " x " };
        let _ = write!(
            out,
            "{sep}J(X/<{}>)^{}",
            f.subgroup_gens.join(", "),
            f.multiplicity
        );
    }
    let _ = writeln!(out);
    for f in &r.factors {
        if let (Some(g), Some(route)) = (f.genus, f.route) {
            let _ = writeln!(
                out,
                "  <{}>  genus {g}  {route:?}",
                f.subgroup_gens.join(", ")
            );
        }
    }
}

fn verdict(out: &mut String, v: &VerdictReport) {
    let _ = writeln!(out, "status       {}", status_name(v.status));
    if let Some(s) = v.streit_value {
        let _ = writeln!(out, "streit value {s}");
    }
    if let Some(r) = &v.relation {
        relation(out, r);
    }
    for line in &v.log {
        let _ = writeln!(out, "  {line}");
    }
}

fn table(out: &mut String, t: &TableReport) {
    let _ = writeln!(
        out,
        "group order {}, exponent {} (z = e^(2 pi i/{}))",
        t.group_order, t.exponent, t.exponent
    );
    for (j, c) in t.classes.iter().enumerate() {
        let _ = writeln!(
            out,
            "class {j}: order {} size {} rep {}",
            c.order, c.size, c.representative
        );
    }
    for (i, row) in t.irreducibles.iter().enumerate() {
        let _ = writeln!(out, "chi{i}: {}", row.join(" | "));
    }
}

pub fn report(r: &Report) -> String {
    let mut out = String::new();
    match r {
        Report::Analyze(a) => {
            surface(&mut out, &a.surface);
            let _ = writeln!(out);
            verdict(&mut out, &a.verdict);
        }
        Report::Streit(s) => {
            let _ = writeln!(out, "genus        {}", s.genus);
            let _ = writeln!(out, "streit value {}", s.streit_value);
            let _ = writeln!(out, "status       {}", status_name(s.status));
        }
        Report::Table(t) => table(&mut out, t),
        Report::Quotients(s) => surface(&mut out, s),
        Report::Verify(v) => {
            let _ = writeln!(out, "holds        {}", v.holds);
            verdict(&mut out, &v.verdict);
        }
    }
    out
}

pub fn batch(b: &BatchReport) -> String {
    b.rows.iter().map(|r| format!("{}\n", r.summary)).collect()
}
