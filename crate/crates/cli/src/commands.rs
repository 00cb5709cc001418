use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use veronese_core::{
    check_set_equality, check_toric_equality, parse_point, render_point, ChartIndex,
    EqualityReport, Error, Field, OracleConfig, PointSampler, PrimeField, Rationals, SampleField,
    Step1Certificate, Veronese, VeroneseContext,
};

use crate::output::{
    CheckResult, MapOutput, MatrixOutput, MemberOutput, MinorsOutput, OracleOutput, VerifyOutput,
};
use crate::{exit, CliConfig, Command, FieldSpec, Format, Outcome, SCHEMA_VERSION};

/// Run one parsed command.
pub fn execute(cfg: &CliConfig, cmd: &Command) -> Outcome {
    let (n, d) = match (cfg.n, cfg.d) {
        (Some(n), Some(d)) => (n, d),
        _ => return Outcome::error(exit::USAGE, "error: --n and --d are required"),
    };
    let ver = match VeroneseContext::new(n, d).and_then(|ctx| Veronese::new(&ctx)) {
        Ok(v) => v,
        Err(e) => return Outcome::error(exit::USAGE, format!("error: {e}")),
    };
    match (cmd, cfg.field) {
        (Command::Matrix, _) => matrix(&ver, cfg),
        (Command::Minors, _) => minors(&ver, cfg),
        (Command::Oracle { serial, no_toric }, FieldSpec::Prime(p)) => {
            let field = PrimeField::new(p).expect("validated when parsed");
            oracle(&ver, cfg, field, *serial, *no_toric)
        }
        (Command::Oracle { .. }, FieldSpec::Rational) => Outcome::error(
            exit::USAGE,
            "error: oracle needs a prime field, e.g. --field fp:3",
        ),
        (_, FieldSpec::Rational) => with_field(&ver, cfg, cmd, &Rationals),
        (_, FieldSpec::Prime(p)) => with_field(
            &ver,
            cfg,
            cmd,
            &PrimeField::new(p).expect("validated when parsed"),
        ),
    }
}

fn with_field<F: SampleField>(
    ver: &Veronese,
    cfg: &CliConfig,
    cmd: &Command,
    field: &F,
) -> Outcome {
    match cmd {
        Command::Eval { point } => eval(ver, cfg, field, point),
        Command::Invert { point } => invert(ver, cfg, field, point),
        Command::Member { point } => member(ver, cfg, field, point),
        Command::Verify {
            points,
            chain_points,
            certificate,
            write_certificate,
        } => verify(
            ver,
            cfg,
            field,
            VerifyOptions {
                points: *points,
                chain_points: *chain_points,
                certificate: certificate.as_deref(),
                write_certificate: write_certificate.as_deref(),
            },
        ),
        Command::Matrix | Command::Minors | Command::Oracle { .. } => {
            unreachable!("dispatched in execute")
        }
    }
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("output documents serialize");
    s.push('\n');
    s
}

fn grid(rows: &[Vec<String>]) -> String {
    let cols = rows.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols)
        .map(|k| rows.iter().map(|r| r[k].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "  {}", cells.join("  ").trim_end());
    }
    out
}

fn matrix(ver: &Veronese, cfg: &CliConfig) -> Outcome {
    let m = ver.matrix();
    let monomials: Vec<Vec<String>> = m
        .rows()
        .iter()
        .map(|r| r.iter().map(|e| e.monomial_string()).collect())
        .collect();
    if cfg.format == Format::Json {
        return Outcome::ok(to_json(&MatrixOutput {
            schema_version: SCHEMA_VERSION,
            matrix: m.to_document(),
            monomials,
            minor_count: ver.minors().len(),
        }));
    }
    let coords: Vec<Vec<String>> = m
        .rows()
        .iter()
        .map(|r| r.iter().map(|e| e.coord_name()).collect())
        .collect();
    let mut out = format!(
        "n = {}, d = {}: {} x {} matrix, N = {}\n",
        ver.ctx().n(),
        ver.ctx().d(),
        m.num_rows(),
        m.num_cols(),
        ver.ctx().ambient_dim()
    );
    out.push_str("L:\n");
    out.push_str(&grid(&monomials));
    out.push_str("M:\n");
    out.push_str(&grid(&coords));
    match ver.minors().len() {
        0 => out.push_str("no 2-minors\n"),
        k => {
            let _ = writeln!(out, "{k} distinct 2-minor{}", if k == 1 { "" } else { "s" });
        }
    }
    Outcome::ok(out)
}

fn minors(ver: &Veronese, cfg: &CliConfig) -> Outcome {
    let list: Vec<String> = ver.minors().iter().map(ToString::to_string).collect();
    if cfg.format == Format::Json {
        return Outcome::ok(to_json(&MinorsOutput {
            schema_version: SCHEMA_VERSION,
            n: ver.ctx().n(),
            d: ver.ctx().d(),
            count: list.len(),
            minors: list,
        }));
    }
    let mut out = String::new();
    for b in &list {
        let _ = writeln!(out, "{b}");
    }
    if list.is_empty() {
        out.push_str("no 2-minors\n");
    } else {
        let _ = writeln!(
            out,
            "{} distinct 2-minor{}",
            list.len(),
            if list.len() == 1 { "" } else { "s" }
        );
    }
    Outcome::ok(out)
}

fn usage(e: Error) -> Outcome {
    Outcome::error(exit::USAGE, format!("error: {e}"))
}

fn eval<F: Field>(ver: &Veronese, cfg: &CliConfig, field: &F, point: &str) -> Outcome {
    let image = match parse_point(field, point).and_then(|x| ver.eval(field, &x)) {
        Ok(q) => render_point(field, &q),
        Err(e) => return usage(e),
    };
    if cfg.format == Format::Json {
        return Outcome::ok(to_json(&MapOutput {
            schema_version: SCHEMA_VERSION,
            n: ver.ctx().n(),
            d: ver.ctx().d(),
            field: cfg.field.to_string(),
            input: point.trim().to_string(),
            output: Some(image),
            chart: None,
            error: None,
        }));
    }
    Outcome::ok(format!("{image}\n"))
}

fn invert<F: Field>(ver: &Veronese, cfg: &CliConfig, field: &F, point: &str) -> Outcome {
    let q = match parse_point(field, point) {
        Ok(q) => q,
        Err(e) => return usage(e),
    };
    let result = ver
        .inverse_map_checked(field, &q)
        .and_then(|x| Ok((ver.chart_select(field, &q)?, x)));
    let (output, chart, error, code) = match result {
        Ok((ChartIndex(i), x)) => (Some(render_point(field, &x)), Some(i), None, exit::SUCCESS),
        Err(e @ (Error::NotOnVariety(_) | Error::NoChart)) => {
            (None, None, Some(e.to_string()), exit::CHECK_FAILURE)
        }
        Err(e) => return usage(e),
    };
    if cfg.format == Format::Json {
        let doc = MapOutput {
            schema_version: SCHEMA_VERSION,
            n: ver.ctx().n(),
            d: ver.ctx().d(),
            field: cfg.field.to_string(),
            input: point.trim().to_string(),
            output,
            chart,
            error,
        };
        return Outcome::with_code(code, to_json(&doc));
    }
    match (output, error) {
        (Some(x), _) => Outcome::ok(format!("{x}\n")),
        (None, Some(e)) => Outcome::with_code(code, format!("{e}\n")),
        (None, None) => unreachable!(),
    }
}

fn member<F: Field>(ver: &Veronese, cfg: &CliConfig, field: &F, point: &str) -> Outcome {
    let found = match parse_point(field, point).and_then(|q| {
        Ok(ver
            .first_nonvanishing_minor(field, &q)?
            .map(|(b, v)| (b.to_string(), field.render(&v))))
    }) {
        Ok(found) => found,
        Err(e) => return usage(e),
    };
    if cfg.format == Format::Json {
        let (minor, value) = found.clone().unzip();
        return Outcome::ok(to_json(&MemberOutput {
            schema_version: SCHEMA_VERSION,
            n: ver.ctx().n(),
            d: ver.ctx().d(),
            field: cfg.field.to_string(),
            point: point.trim().to_string(),
            member: found.is_none(),
            minor,
            value,
        }));
    }
    match found {
        None => Outcome::ok("true\n".to_string()),
        Some((minor, value)) => {
            Outcome::ok(format!("false (minor {minor} evaluates to {value})\n"))
        }
    }
}

struct VerifyOptions<'a> {
    points: usize,
    chain_points: usize,
    certificate: Option<&'a Path>,
    write_certificate: Option<&'a Path>,
}

fn check(name: &str, result: Result<String, String>) -> CheckResult {
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn roundtrip_and_charts<F: SampleField>(
    ver: &Veronese,
    field: &F,
    seed: u64,
    count: usize,
) -> (Result<String, String>, Result<String, String>) {
    let mut sampler = PointSampler::new(seed, ver.ctx().n());
    let mut pairs = 0usize;
    let mut chart_failure = None;
    for k in 0..count {
        let x = sampler.next_point(field);
        let q = match ver.eval(field, &x) {
            Ok(q) => q,
            Err(e) => return (Err(format!("point {k}: {e}")), Err("not run".into())),
        };
        match ver.inverse_map_checked(field, &q) {
            Ok(back) if back == x => {}
            Ok(back) => {
                return (
                    Err(format!(
                        "point {k}: {} maps back to {}",
                        render_point(field, &x),
                        render_point(field, &back)
                    )),
                    Err("not run".into()),
                )
            }
            Err(e) => {
                return (
                    Err(format!("point {k}: {}: {e}", render_point(field, &x))),
                    Err("not run".into()),
                )
            }
        }
        let charts = ver.charts_at(field, &q);
        for (a, &i) in charts.iter().enumerate() {
            for &j in &charts[a + 1..] {
                pairs += 1;
                if chart_failure.is_none() && !ver.charts_agree(field, i, j, &q).unwrap_or(false) {
                    chart_failure = Some(format!(
                        "charts {} and {} disagree at {}",
                        i.0,
                        j.0,
                        render_point(field, &q)
                    ));
                }
            }
        }
    }
    let charts = match chart_failure {
        Some(f) => Err(f),
        None => Ok(format!("{pairs} chart pairs agree")),
    };
    (Ok(format!("{count} points")), charts)
}

fn load_certificate(path: &Path) -> Result<Step1Certificate, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn step3_check<F: SampleField>(
    ver: &Veronese,
    field: &F,
    seed: u64,
    per_chart: usize,
) -> Result<String, String> {
    let chains = ver.all_step3_chains();
    for chain in &chains {
        ver.verify_step3_structure(chain)
            .map_err(|e| format!("chart {}, {}: {e}", chain.chart, chain.target.coord_name()))?;
    }
    let n = ver.ctx().n();
    for i in 0..=n {
        let mut sampler = PointSampler::on_chart(seed.wrapping_add(1 + i as u64), n, i);
        for _ in 0..per_chart {
            let x = sampler.next_point(field);
            let q = ver.eval(field, &x).map_err(|e| e.to_string())?;
            for chain in chains.iter().filter(|c| c.chart == i) {
                ver.verify_step3(field, chain, &q).map_err(|e| {
                    format!(
                        "chart {i}, {} at {}: {e}",
                        chain.target.coord_name(),
                        render_point(field, &q)
                    )
                })?;
            }
        }
    }
    Ok(format!(
        "{} chains, {per_chart} image points per chart",
        chains.len()
    ))
}

fn verify<F: SampleField>(
    ver: &Veronese,
    cfg: &CliConfig,
    field: &F,
    opts: VerifyOptions<'_>,
) -> Outcome {
    let generated = ver.step1_certificate();
    if let Some(path) = opts.write_certificate {
        if let Err(e) = std::fs::write(path, to_json(&generated)) {
            return Outcome::error(exit::USAGE, format!("error: {}: {e}", path.display()));
        }
    }
    let cert = match opts.certificate {
        Some(path) => match load_certificate(path) {
            Ok(c) => c,
            Err(e) => return Outcome::error(exit::USAGE, format!("error: {e}")),
        },
        None => generated,
    };

    let (roundtrip, charts) = roundtrip_and_charts(ver, field, cfg.seed, opts.points);
    let step1 = ver
        .verify_step1(&cert)
        .map(|()| format!("{} steps", cert.steps.len()))
        .map_err(|e| e.to_string());
    let checks = vec![
        check("roundtrip", roundtrip),
        check("chart_agreement", charts),
        check("step1_certificate", step1),
        check(
            "step3_chains",
            step3_check(ver, field, cfg.seed, opts.chain_points),
        ),
    ];
    let passed = checks.iter().all(|c| c.passed);
    let code = if passed {
        exit::SUCCESS
    } else {
        exit::CHECK_FAILURE
    };

    if cfg.format == Format::Json {
        let doc = VerifyOutput {
            schema_version: SCHEMA_VERSION,
            n: ver.ctx().n(),
            d: ver.ctx().d(),
            field: cfg.field.to_string(),
            seed: cfg.seed,
            passed,
            checks,
        };
        return Outcome::with_code(code, to_json(&doc));
    }
    let mut out = String::new();
    for c in &checks {
        let _ = writeln!(
            out,
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    out.push_str(if passed {
        "all checks passed\n"
    } else {
        "verification failed\n"
    });
    Outcome::with_code(code, out)
}

fn render_report(out: &mut String, r: &EqualityReport) {
    let title = match r.comparison {
        veronese_core::Comparison::VeroneseImage => "V(minors) vs Veronese image",
        veronese_core::Comparison::ToricQuadrics => "V(minors) vs V(balanced quadrics)",
    };
    let _ = writeln!(out, "{title} over F_{} (n = {}, d = {})", r.q, r.n, r.d);
    let _ = writeln!(out, "  variety points:   {}", r.variety_count);
    let _ = writeln!(out, "  reference points: {}", r.reference_count);
    let _ = writeln!(out, "  |P^n(F_q)|:       {}", r.expected_count);
    let _ = writeln!(out, "  chartless points: {}", r.chartless_count);
    let _ = writeln!(out, "  discrepancies:    {}", r.discrepancy_count);
    for w in &r.witnesses {
        let _ = writeln!(out, "    {} only in {}", w.point, w.only_in);
    }
    let _ = writeln!(out, "  equal: {}", r.equal);
}

fn oracle(
    ver: &Veronese,
    cfg: &CliConfig,
    field: PrimeField,
    serial: bool,
    no_toric: bool,
) -> Outcome {
    let oc = OracleConfig {
        budget: cfg.budget,
        parallel: !serial,
    };
    let mut reports = Vec::new();
    let mut run =
        |f: fn(&Veronese, PrimeField, &OracleConfig) -> veronese_core::Result<EqualityReport>| {
            f(ver, field, &oc).map(|r| reports.push(r))
        };
    let result = run(check_set_equality).and_then(|()| {
        if no_toric {
            Ok(())
        } else {
            run(check_toric_equality)
        }
    });
    match result {
        Ok(()) => {}
        Err(e @ Error::BudgetExceeded { .. }) => {
            return Outcome::error(
                exit::BUDGET,
                format!("refused: {e}; raise --budget to run it"),
            )
        }
        Err(e) => return usage(e),
    }
    let equal = reports.iter().all(|r| r.equal);
    let code = if equal {
        exit::SUCCESS
    } else {
        exit::CHECK_FAILURE
    };
    if cfg.format == Format::Json {
        let doc = OracleOutput {
            schema_version: SCHEMA_VERSION,
            n: ver.ctx().n(),
            d: ver.ctx().d(),
            q: field.modulus(),
            equal,
            reports,
        };
        return Outcome::with_code(code, to_json(&doc));
    }
    let mut out = String::new();
    for r in &reports {
        render_report(&mut out, r);
    }
    if let Some(r) = reports.first() {
        let _ = writeln!(out, "note: {}", r.note);
    }
    Outcome::with_code(code, out)
}
