use std::fmt::Write as _;

use eqlines::bounds::{
    corollary_table, gerzon_bound, lemmens_seidel_bound, okuda_yu_bound, BoundReport,
    NonexistenceCertificate,
};
use eqlines::designs::{harmonic_index_design_test, parse_configuration, profile, tightness_check, Scalar};
use eqlines::lp::{triangle_bound, verify_proposition_33, Simplex, TriangleLpInstance};
use eqlines::{Error, Exec, Rational, RationalExt};
use serde_json::{json, Value};

use crate::envelope::Envelope;
use crate::{BoundArgs, CheckArgs, Format, LpArgs, Method, TableArgs, TableFormat};

pub struct Output {
    pub envelope: Envelope,
    /// Replaces the JSON envelope on stdout when set.
    pub text: Option<String>,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PivotLimit(_) => 3,
            Error::Verification(_) => 1,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

type Outcome = Result<Output, Failure>;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("core types serialize")
}

fn exact(r: &Rational) -> String {
    r.to_exact_string()
}

fn approx(r: &Rational) -> String {
    format!("{:.6}", r.to_f64_lossy())
}

fn scalar(s: &Scalar) -> String {
    match s {
        Scalar::Exact(r) => exact(r),
        Scalar::Approx(v) => format!("{v:.12}"),
    }
}

pub fn bound(args: &BoundArgs) -> Outcome {
    let need_alpha = || {
        args.alpha
            .as_ref()
            .ok_or_else(|| Failure::input("--alpha is required for this method"))
    };
    let mut reports: Vec<BoundReport> = Vec::new();
    match args.method {
        Method::Gerzon => reports.push(gerzon_bound(args.n)?),
        Method::Ls => reports.push(lemmens_seidel_bound(args.n, need_alpha()?)?),
        Method::OkudaYu => reports.push(okuda_yu_bound(args.n, need_alpha()?)?),
        Method::All => {
            let alpha = need_alpha()?;
            reports.push(gerzon_bound(args.n)?);
            reports.push(lemmens_seidel_bound(args.n, alpha)?);
            reports.push(okuda_yu_bound(args.n, alpha)?);
        }
    }
    let inputs = json!({
        "n": args.n,
        "alpha": args.alpha.as_ref().map(exact),
        "method": format!("{:?}", args.method).to_lowercase(),
    });
    let envelope = Envelope::new("bound", inputs, json!({ "reports": to_value(&reports) }), Value::Null);
    let text = (args.format == Format::Text).then(|| {
        let mut s = String::new();
        for r in &reports {
            match &r.value {
                Some(v) => {
                    let _ = writeln!(s, "{:<16} {:>14}  ~{}", r.method.to_string(), exact(v), approx(v));
                }
                None => {
                    let _ = writeln!(s, "{:<16} {:>14}  ({})", r.method.to_string(), "inapplicable", r.reason);
                }
            }
        }
        s
    });
    Ok(Output { envelope, text })
}

const CSV_HEADER: &str = "k,n_k,alpha_k,bound,tight_cardinality,verdict,lemmens_seidel_witness";

fn csv_row(c: &NonexistenceCertificate) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        c.k,
        c.n_k,
        exact(&c.alpha_k),
        exact(&c.bound),
        c.tight_cardinality,
        if c.verdict { "nonexistent" } else { "undecided" },
        exact(&c.lemmens_seidel_witness)
    )
}

pub fn table(args: &TableArgs, exec: Exec) -> Outcome {
    if args.k_min < 2 || args.k_min > args.k_max {
        return Err(Failure::input(format!(
            "need 2 <= k-min <= k-max, got {}..{}",
            args.k_min, args.k_max
        )));
    }
    let rows = corollary_table(args.k_min, args.k_max, exec)?;
    let inputs = json!({ "k_min": args.k_min, "k_max": args.k_max });
    let envelope = Envelope::new("table", inputs, json!({ "rows": to_value(&rows) }), Value::Null);
    let text = match args.format {
        TableFormat::Json => None,
        TableFormat::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for r in &rows {
                s.push_str(&csv_row(r));
                s.push('\n');
            }
            Some(s)
        }
        TableFormat::Text => {
            let mut s = format!(
                "{:>4} {:>8} {:>8} {:>14} {:>20}  {:<12} {}\n",
                "k", "n_k", "alpha_k", "bound", "tight |X|", "verdict", "LS witness"
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>4} {:>8} {:>8} {:>14} {:>20}  {:<12} {}",
                    r.k,
                    r.n_k,
                    exact(&r.alpha_k),
                    exact(&r.bound),
                    r.tight_cardinality,
                    if r.verdict { "nonexistent" } else { "undecided" },
                    exact(&r.lemmens_seidel_witness)
                );
            }
            Some(s)
        }
    };
    Ok(Output { envelope, text })
}

pub fn lp(args: &LpArgs, exec: Exec) -> Outcome {
    let neg_alpha = -args.alpha.clone();
    let instance = if args.minimal {
        if args.beta.as_ref().is_some_and(|b| b != &neg_alpha) {
            return Err(Failure::input("--minimal fixes beta = -alpha"));
        }
        TriangleLpInstance::minimal(args.n, args.alpha.clone())?
    } else {
        TriangleLpInstance::build(
            args.n,
            args.alpha.clone(),
            args.beta.clone().unwrap_or_else(|| neg_alpha.clone()),
            args.lmax_p,
            args.lmax_s,
            args.imax_s,
            exec,
        )?
    };
    let solver = Simplex::with_max_pivots(args.max_pivots);
    let tb = triangle_bound(&instance, &args.tol, &solver)?;
    tb.upper_certificate.verify(&instance, &tb.upper_level)?;
    if !instance.contains(&tb.lower_point) {
        return Err(Error::Verification("lower point violates the instance".into()).into());
    }

    let closed_form = match okuda_yu_bound(args.n, &args.alpha) {
        Ok(r) if r.applicable && instance.beta == neg_alpha => r.value,
        _ => None,
    };
    let proof = args.minimal.then(|| match verify_proposition_33(args.n, &args.alpha) {
        Ok(replay) => to_value(&replay),
        Err(e) => json!({ "holds": false, "reason": e.to_string() }),
    });

    let inputs = json!({
        "n": args.n,
        "alpha": exact(&instance.alpha),
        "beta": exact(&instance.beta),
        "lmax_p": instance.l_max_p,
        "lmax_s": instance.l_max_s,
        "imax_s": instance.i_max_s,
        "tol": exact(&args.tol),
        "minimal": args.minimal,
        "max_pivots": args.max_pivots,
    });
    let results = json!({
        "objective": "1 + (x1 + x2)/3",
        "lower": exact(&tb.lower),
        "upper": exact(&tb.upper),
        "certified_upper": exact(&tb.certified_upper),
        "gap": exact(&tb.gap),
        "lower_point": tb.lower_point.iter().map(exact).collect::<Vec<_>>(),
        "closed_form": closed_form.as_ref().map(exact),
        "bisection_steps": tb.transcript.len(),
    });
    let certificates = json!({
        "upper_level": exact(&tb.upper_level),
        "upper_certificate": to_value(&tb.upper_certificate),
        "certificate_verified": true,
        "transcript": to_value(&tb.transcript),
        "instance": to_value(&instance),
        "proof": proof,
    });
    let text = (args.format == Format::Text).then(|| {
        let mut s = String::new();
        let _ = writeln!(s, "objective        1 + (x1 + x2)/3");
        let _ = writeln!(s, "constraints      {}", instance.constraints.len());
        for (name, v) in [
            ("lower", &tb.lower),
            ("certified upper", &tb.certified_upper),
            ("upper", &tb.upper),
            ("gap", &tb.gap),
        ] {
            let _ = writeln!(s, "{name:<16} {}  ~{}", exact(v), approx(v));
        }
        if let Some(c) = &closed_form {
            let _ = writeln!(s, "closed form      {}", exact(c));
        }
        let _ = writeln!(s, "bisection steps  {}", tb.transcript.len());
        if let Some(p) = &certificates["proof"].as_object() {
            let holds = p.get("holds").and_then(Value::as_bool).unwrap_or(false);
            let _ = writeln!(s, "proof replay     {}", if holds { "holds" } else { "does not hold" });
            for step in p.get("steps").and_then(Value::as_array).into_iter().flatten() {
                let _ = writeln!(
                    s,
                    "  [{}] {}: {}",
                    if step["ok"].as_bool() == Some(true) { "ok" } else { "FAIL" },
                    step["name"].as_str().unwrap_or(""),
                    step["detail"].as_str().unwrap_or("")
                );
            }
            if let Some(reason) = p.get("reason").and_then(Value::as_str) {
                let _ = writeln!(s, "  {reason}");
            }
        }
        s
    });
    Ok(Output {
        envelope: Envelope::new("lp", inputs, results, certificates),
        text,
    })
}

pub fn check(args: &CheckArgs, exec: Exec) -> Outcome {
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| Failure::input(format!("{}: {e}", args.file.display())))?;
    let config = parse_configuration(&text, args.tolerance, exec)
        .map_err(|e| Failure::input(format!("{}: {e}", args.file.display())))?;
    let prof = profile(&config);
    let design = harmonic_index_design_test(&config, args.t)?;
    let tight = tightness_check(&config)?;

    let inputs = json!({
        "file": args.file.display().to_string(),
        "t": args.t,
        "tolerance": args.tolerance,
        "mode": if config.is_exact() { "exact" } else { "approximate" },
    });
    let results = json!({
        "profile": to_value(&prof),
        "design": to_value(&design),
        "tightness": to_value(&tight),
    });
    let out = (args.format == Format::Text).then(|| {
        let mut s = String::new();
        let _ = writeln!(s, "points           {} in dimension {}", prof.size, prof.dimension);
        let _ = writeln!(s, "mode             {}", if prof.exact { "exact" } else { "approximate" });
        if let Some(r) = prof.rank {
            let _ = writeln!(s, "rank             {r}");
        }
        let vals: Vec<String> = prof.values.iter().map(scalar).collect();
        let _ = writeln!(s, "inner products   {{{}}}", vals.join(", "));
        let _ = writeln!(s, "two-distance     {}", prof.is_two_distance);
        let _ = writeln!(
            s,
            "equiangular      {}",
            prof.equiangular_with.as_ref().map_or("no".into(), scalar)
        );
        let _ = writeln!(s, "design t={}       {} (sum {})", design.t, design.is_design, scalar(&design.sum));
        let _ = writeln!(s, "tightness        {}", tight.message);
        s
    });
    Ok(Output {
        envelope: Envelope::new("check", inputs, results, Value::Null),
        text: out,
    })
}
