//! Reports for the `qrv` command line: building them from the verifiers in
//! `qrv-core`, and rendering them as text, JSON or CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use qrv_core::qcombinatorics::{poch_to_binom_check, qchu_check, ChuForm};
use qrv_core::theorems::{
    derive_instance, equivalent_form_sum, harmonic_full, harmonic_twisted, phi21_truncated, step_audit, step_final2,
    step_final3_final4, verify_classical, verify_special_case, verify_theorem, verify_theorem_adjusted,
    ClassicalInstance, SpecialCase, TheoremInstance,
};
use qrv_core::{Error, Rational};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub n: i64,
    pub d: i64,
    pub r: i64,
    pub a: Option<i64>,
    pub e: Option<i64>,
    pub sign: Option<i8>,
    pub flags: Vec<String>,
    pub checks: BTreeMap<String, Outcome>,
    pub ms: u64,
}

impl Item {
    fn from_instance(inst: &TheoremInstance) -> Self {
        let mut flags = Vec::new();
        if inst.degenerate {
            flags.push(String::from("degenerate"));
        }
        if inst.sign_anomaly() {
            flags.push(String::from("sign-anomaly"));
        }
        Item {
            n: inst.n,
            d: inst.d,
            r: inst.r,
            a: Some(inst.a),
            e: Some(inst.e),
            sign: Some(inst.sign),
            flags,
            checks: BTreeMap::new(),
            ms: 0,
        }
    }

    pub fn is_skipped(&self) -> bool {
        self.flags.iter().any(|f| f == "skipped")
    }

    pub fn passed(&self) -> bool {
        !self.is_skipped() && self.checks.values().all(|c| *c == Outcome::Pass)
    }

    fn check(&mut self, name: &str, holds: bool) {
        self.checks.insert(String::from(name), Outcome::from_bool(holds));
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub summary: Summary,
    pub items: Vec<Item>,
}

impl Report {
    pub fn new(items: Vec<Item>) -> Self {
        let skipped = items.iter().filter(|i| i.is_skipped()).count();
        let passed = items.iter().filter(|i| i.passed()).count();
        let total = items.len();
        Report { summary: Summary { total, passed, failed: total - passed - skipped, skipped }, items }
    }

    pub fn exit_code(&self) -> u8 {
        if self.summary.failed == 0 {
            0
        } else {
            1
        }
    }

    /// The same report with every `ms` zeroed.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        out.items.iter_mut().for_each(|i| i.ms = 0);
        out
    }
}

fn timed(item: &mut Item, f: impl FnOnce(&mut Item) -> Result<(), Error>) -> Result<(), Error> {
    let start = Instant::now();
    f(item)?;
    item.ms = start.elapsed().as_millis() as u64;
    Ok(())
}

/// One instance; with `steps`, every step check of the proof as well.
pub fn cmd_verify(n: i64, d: i64, r: i64, steps: bool) -> Result<Report, Error> {
    let inst = derive_instance(n, d, r)?;
    let mut item = Item::from_instance(&inst);
    timed(&mut item, |item| {
        item.check("theorem", verify_theorem(n, d, r)?.holds);
        if steps {
            item.check("theorem_adjusted", verify_theorem_adjusted(n, d, r)?.holds);
            for (name, holds) in step_audit(n, d, r)? {
                item.check(&name, holds);
            }
        }
        Ok(())
    })?;
    Ok(Report::new(vec![item]))
}

fn coprime(a: i64, b: i64) -> bool {
    (2..=a.min(b)).all(|g| a % g != 0 || b % g != 0)
}

/// Every `(n, d, r)` with `2 <= n <= n_max`, `2 <= d <= d_max`, coprime,
/// `1 <= r <= r_max`; `d | r` only when asked for.
pub fn sweep_grid(n_max: i64, d_max: i64, r_max: i64, include_degenerate: bool) -> Result<Vec<(i64, i64, i64)>, Error> {
    if n_max < 2 || d_max < 2 || r_max < 1 {
        return Err(Error::InvalidArgument(format!(
            "sweep bounds need n-max, d-max >= 2 and r-max >= 1, got {n_max}, {d_max}, {r_max}"
        )));
    }
    let mut grid = Vec::new();
    for n in 2..=n_max {
        for d in (2..=d_max).filter(|d| coprime(n, *d)) {
            grid.extend((1..=r_max).filter(|r| include_degenerate || r % d != 0).map(|r| (n, d, r)));
        }
    }
    Ok(grid)
}

pub fn cmd_sweep(n_max: i64, d_max: i64, r_max: i64, include_degenerate: bool) -> Result<Report, Error> {
    let grid = sweep_grid(n_max, d_max, r_max, include_degenerate)?;
    let items = grid
        .par_iter()
        .map(|&(n, d, r)| {
            let mut item = Item::from_instance(&derive_instance(n, d, r)?);
            timed(&mut item, |item| {
                item.check("theorem", verify_theorem(n, d, r)?.holds);
                Ok(())
            })?;
            Ok(item)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Report::new(items))
}

pub fn odd_primes(from: u64, to: u64) -> impl Iterator<Item = u64> {
    (from.max(3)..=to).filter(|p| qrv_core::congruence::is_prime(*p))
}

/// The classical congruence for each `alpha` and each prime `5 <= p <= p_max`
/// (and `p = 3` for `alpha = 1/2`). Items carry `alpha = r/d`, `n = p` and
/// `e = 0`; a prime dividing the denominator gives a skipped item.
pub fn cmd_classical(alphas: &[Rational], p_max: u64) -> Result<Report, Error> {
    let mut alphas = alphas.to_vec();
    alphas.sort();
    alphas.dedup();
    let half = Rational::new(1, 2);
    let mut work = Vec::new();
    for alpha in &alphas {
        let from = if *alpha == half { 3 } else { 5 };
        work.extend(odd_primes(from, p_max).map(|p| (alpha.clone(), p)));
    }
    let items = work.par_iter().map(|(alpha, p)| classical_item(alpha, *p)).collect::<Result<Vec<_>, Error>>()?;
    Ok(Report::new(items))
}

fn classical_item(alpha: &Rational, p: u64) -> Result<Item, Error> {
    let small =
        |x| Rational::from(x).to_i64().ok_or_else(|| Error::InvalidArgument(format!("alpha {alpha} too large")));
    let mut item = Item {
        n: p as i64,
        d: small(alpha.denom())?,
        r: small(alpha.numer())?,
        a: None,
        e: None,
        sign: None,
        flags: Vec::new(),
        checks: BTreeMap::new(),
        ms: 0,
    };
    match ClassicalInstance::new(alpha.clone(), p) {
        Ok(inst) => {
            item.a = Some(inst.a as i64);
            item.e = Some(0);
            item.sign = Some(inst.sign());
            timed(&mut item, |item| {
                item.check("classical", verify_classical(alpha, p)?.holds);
                Ok(())
            })?;
        }
        Err(Error::NotInvertible(..)) => item.flags.push(String::from("skipped")),
        Err(e) => return Err(e),
    }
    Ok(item)
}

/// The theorem at `n = p`, `r = 1` plus the closed-form sign and exponent,
/// for each case and each admissible prime `p <= p_max`.
pub fn cmd_special(cases: &[SpecialCase], p_max: u64) -> Result<Report, Error> {
    let mut work = Vec::new();
    for &case in cases {
        work.extend(odd_primes(case.min_prime(), p_max).filter(|p| (*p as i64) % case.d() != 0).map(|p| (case, p)));
    }
    work.sort_by_key(|(case, p)| (*p, case.d()));
    let items = work
        .par_iter()
        .map(|&(case, p)| {
            let mut item = Item::from_instance(&derive_instance(p as i64, case.d(), 1)?);
            item.flags.push(String::from(case.label()));
            timed(&mut item, |item| {
                let outcome = verify_special_case(case, p)?;
                item.check("theorem", outcome.theorem.holds);
                item.check("closed_form", outcome.closed_form_matches());
                Ok(())
            })?;
            Ok(item)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Report::new(items))
}

/// Exact identities on small instances: both q-Chu-Vandermonde forms, the
/// Pochhammer rewrite, the two constructions of the truncated sum, and the
/// proof's exact and mod-`Phi_n` identities.
pub fn cmd_selftest() -> Result<Report, Error> {
    let grid: Vec<(i64, i64, i64)> = (2..=8)
        .flat_map(|n| (2..=6).filter(move |d| coprime(n, *d)).flat_map(move |d| (1..d).map(move |r| (n, d, r))))
        .collect();
    let items = grid
        .par_iter()
        .map(|&(n, d, r)| {
            let inst = derive_instance(n, d, r)?;
            let mut item = Item::from_instance(&inst);
            timed(&mut item, |item| {
                let (nu, du) = (n as u64, d as u64);
                let chu = (0..=nu + du)
                    .all(|k| qchu_check(ChuForm::First, nu, du, k) && qchu_check(ChuForm::Second, nu, du, k));
                item.check("qchu", chu);
                item.check(
                    "poch_to_binom",
                    (0..=8).all(|k| poch_to_binom_check(r, du, k) && poch_to_binom_check(-r, du, k)),
                );
                let direct = phi21_truncated(r, d - r, d, du, 0, nu)?;
                item.check("equivalent_form", equivalent_form_sum(nu, du, r).eq_exact(&direct));
                item.check("final2", step_final2(n, d, inst.a)?);
                item.check("final3_final4", step_final3_final4(n, d, r)?.holds);
                item.check("harmonic_full", harmonic_full(n, d)?.holds);
                item.check("harmonic_twisted", harmonic_twisted(n, d, inst.a)?.holds);
                Ok(())
            })?;
            Ok(item)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Report::new(items))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => render_text(report),
        Format::Json => render_json(report),
        Format::Csv => render_csv(report),
    }
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| String::from("-"), T::to_string)
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    writeln!(out, "{:>4} {:>4} {:>4} {:>4} {:>8} {:>4}  {:<6} flags", "n", "d", "r", "a", "e", "sign", "result")
        .unwrap();
    for item in &report.items {
        let result = if item.is_skipped() {
            "skip"
        } else if item.passed() {
            "pass"
        } else {
            "fail"
        };
        writeln!(
            out,
            "{:>4} {:>4} {:>4} {:>4} {:>8} {:>4}  {:<6} {}",
            item.n,
            item.d,
            item.r,
            opt(&item.a),
            opt(&item.e),
            opt(&item.sign),
            result,
            item.flags.join(",")
        )
        .unwrap();
        if item.checks.len() > 1 {
            for (name, outcome) in &item.checks {
                writeln!(out, "      {name:<22} {}", if *outcome == Outcome::Pass { "pass" } else { "fail" }).unwrap();
            }
        }
    }
    let s = report.summary;
    writeln!(out, "total {}, passed {}, failed {}, skipped {}", s.total, s.passed, s.failed, s.skipped).unwrap();
    out
}

fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
    s.push('\n');
    s
}

pub const CSV_HEADER: [&str; 9] = ["n", "d", "r", "a", "e", "sign", "flags", "checks", "ms"];

fn render_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).unwrap();
    for item in &report.items {
        let checks: Vec<String> = item
            .checks
            .iter()
            .map(|(k, v)| format!("{k}={}", if *v == Outcome::Pass { "pass" } else { "fail" }))
            .collect();
        let opt_csv = |x: Option<i64>| x.map_or_else(String::new, |v| v.to_string());
        w.write_record([
            item.n.to_string(),
            item.d.to_string(),
            item.r.to_string(),
            opt_csv(item.a),
            opt_csv(item.e),
            opt_csv(item.sign.map(i64::from)),
            item.flags.join(";"),
            checks.join(";"),
            item.ms.to_string(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// `Phi_n` as text or as JSON `{n, degree, coefficients}` (ascending).
pub fn render_cyclotomic(n: u64, format: Format) -> Result<String, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument(String::from("cyclotomic index must be positive")));
    }
    let phi = qrv_core::cyclotomic(n);
    let coeffs: Vec<String> = phi.coeffs().iter().map(Rational::to_string).collect();
    Ok(match format {
        Format::Text => format!("Phi_{n}(q) = {phi}\n"),
        Format::Json => {
            let nums: Vec<serde_json::Value> = phi
                .coeffs()
                .iter()
                .map(|c| c.to_i64().map_or_else(|| serde_json::Value::from(c.to_string()), serde_json::Value::from))
                .collect();
            let v = serde_json::json!({ "n": n, "degree": phi.high_exp(), "coefficients": nums });
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
        Format::Csv => {
            let mut s = String::from("exponent,coefficient\n");
            for (i, c) in coeffs.iter().enumerate() {
                writeln!(s, "{i},{c}").unwrap();
            }
            s
        }
    })
}
