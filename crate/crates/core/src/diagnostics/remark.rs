use super::report::{ConvergenceReport, Criterion, ReportBuilder, ReportParameters};
use crate::error::Result;
use crate::mixing::{moment_frac, GammaMixing};
use crate::quadrature::{integrate, QuadOptions};
use crate::special::FractionalOrder;

const PROBE_OFFSET: f64 = 0.25;
const DEPTHS: [f64; 3] = [20.0, 40.0, 80.0];

/// `int_{e^{-depth}}^1 x^{mu - 1 - p} e^{-lambda x} dx` with `x = e^{-u}`; the
/// report lists it against `depth`.
fn truncated_moment(mu: f64, lambda: f64, p: f64, depth: f64) -> Result<f64> {
    let a = mu - p;
    let f = |u: f64| Ok((-a * u - lambda * (-u).exp()).exp());
    Ok(integrate(f, 0.0, depth, &QuadOptions::new(1e-300, 1e-12))?.value)
}

/// Numerical finiteness of `E[alpha^{-p}]`: the truncated integrals near 0
/// stop growing as the cut moves towards 0.
fn numerically_finite(mu: f64, lambda: f64, p: f64) -> Result<(bool, Vec<f64>)> {
    let v = DEPTHS
        .iter()
        .map(|&d| truncated_moment(mu, lambda, p, d))
        .collect::<Result<Vec<f64>>>()?;
    let growth = (v[2] - v[1]) / v[1];
    Ok((growth < 1e-3, v))
}

/// Locates the finiteness boundary of `E[alpha^{-2/rho}]` in `mu` and reports
/// which of `mu > 2 rho`, `mu > 1/(2 rho)`, `mu > 2/rho` it matches.
pub fn check_mixing_condition_remark(mixing: &GammaMixing<f64>, rho: FractionalOrder<f64>) -> Result<ConvergenceReport> {
    let (mu, lambda, r) = (mixing.mu(), mixing.lambda(), rho.value());
    let p = 2.0 / r;
    let params = ReportParameters {
        rho: r,
        mu: Some(mu),
        lambda: Some(lambda),
        ..Default::default()
    };
    let mut rb = ReportBuilder::new("mixing_condition_remark", params);

    let finite = moment_frac(mixing, -p).is_ok();
    rb.summary("moment_finite", if finite { 1.0 } else { 0.0 });
    if let Ok(m) = moment_frac(mixing, -p) {
        rb.summary("moment_value", m);
    }
    let (num_finite, partial) = numerically_finite(mu, lambda, p)?;
    for (d, v) in DEPTHS.iter().zip(&partial) {
        rb.estimate("truncated_moment", *d, *v, 0.0, None);
    }
    rb.criterion(Criterion::holds(
        "quadrature probe agrees with the moment domain",
        (mu - p).abs() < 0.2 || num_finite == finite,
    ));

    // bisection on mu of the moment domain
    let domain_ok = |m: f64| moment_frac(&GammaMixing::new(m, lambda).expect("positive"), -p).is_ok();
    let (mut lo, mut hi) = (1e-12, 1.0 + 4.0 * p);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if domain_ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let boundary = hi;
    rb.summary("boundary_mu", boundary);
    let below = numerically_finite(boundary - PROBE_OFFSET, lambda, p)?.0;
    let above = numerically_finite(boundary + PROBE_OFFSET, lambda, p)?.0;
    rb.criterion(Criterion::holds("quadrature probe flips across the boundary", !below && above));

    let candidates = [("mu > 2 rho", 2.0 * r), ("mu > 1/(2 rho)", 0.5 / r), ("mu > 2/rho", 2.0 / r)];
    let mut matching = Vec::new();
    for (name, c) in candidates {
        rb.summary(&format!("candidate {name}"), c);
        if (c - boundary).abs() <= 1e-9 * boundary.max(1.0) {
            matching.push(name);
        }
    }
    rb.criterion(Criterion::holds("boundary matches mu > 2/rho", matching.contains(&"mu > 2/rho")));
    rb.note(format!("computed boundary mu = {boundary:.12}; matching inequalities: {}", matching.join(", ")));
    let remark_ok = matching.contains(&"mu > 2 rho");
    rb.summary("remark_consistent", if remark_ok { 1.0 } else { 0.0 });
    if !remark_ok {
        rb.note("the stated condition mu - 2 rho > 0 does not match the computed boundary");
    }
    Ok(rb.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(mu: f64, rho: f64) -> ConvergenceReport {
        check_mixing_condition_remark(&GammaMixing::new(mu, 1.0).unwrap(), FractionalOrder::new(rho).unwrap()).unwrap()
    }

    #[test]
    fn finiteness_follows_the_gamma_argument() {
        assert_eq!(run(3.0, 1.9).summary["moment_finite"], 1.0);
        assert_eq!(run(1.0, 1.9).summary["moment_finite"], 0.0);
    }

    #[test]
    fn boundary_is_two_over_rho() {
        let r = run(3.0, 1.9);
        assert!((r.summary["boundary_mu"] - 2.0 / 1.9).abs() < 1e-9);
        assert_eq!(r.summary["remark_consistent"], 0.0);
        assert_eq!(r.verdict, crate::diagnostics::Verdict::Pass);
        // at rho = 1 the candidates 2 rho and 2/rho coincide
        assert_eq!(run(3.0, 1.0).summary["remark_consistent"], 1.0);
    }
}
