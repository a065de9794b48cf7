//! Side-by-side counts from every route, and the verification driver.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::OddPrime;
use crate::aut::enumerate_aut;
use crate::domain::{closed_form_cycle_type, ActionTable};
use crate::error::{Error, Result};
use crate::oracle::{self, DisconnectedCensus, SweepOptions, SweepSummary};
use crate::polya;

/// Counts serialize as decimal strings so no consumer rounds them through f64.
mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(n)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(n: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
            match n {
                Some(n) => s.collect_str(n),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
            Option::<String>::deserialize(d)?.map(|s| s.parse().map_err(D::Error::custom)).transpose()
        }
    }
}

/// Per-route values; `None` when the route was not run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Methods {
    /// The closed formula for N, summand by summand.
    #[serde(with = "decimal::opt", default)]
    pub closed_form: Option<BigInt>,
    /// The closed-form cycle index at all-twos.
    #[serde(with = "decimal::opt", default)]
    pub cycle_index_eval: Option<BigInt>,
    /// The cycle index averaged from directly decomposed permutations, at all-twos.
    #[serde(with = "decimal::opt", default)]
    pub bruteforce_cycle_index_eval: Option<BigInt>,
    #[serde(with = "decimal::opt", default)]
    pub burnside: Option<BigInt>,
    #[serde(with = "decimal::opt", default)]
    pub orbit_partition: Option<BigInt>,
    #[serde(with = "decimal::opt", default)]
    pub oracle_circulant: Option<BigInt>,
    #[serde(with = "decimal::opt", default)]
    pub oracle_connected: Option<BigInt>,
    #[serde(default)]
    pub census: Option<DisconnectedCensus>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub quantity: String,
    pub method_a: String,
    #[serde(with = "decimal")]
    pub value_a: BigInt,
    pub method_b: String,
    #[serde(with = "decimal")]
    pub value_b: BigInt,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} = {} but {} = {}",
            self.quantity, self.method_a, self.value_a, self.method_b, self.value_b
        )
    }
}

/// `N`, `N_c`, `N'` from the closed formulas, plus whatever other routes ran.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub p: u64,
    #[serde(with = "decimal")]
    pub n_total: BigInt,
    #[serde(with = "decimal")]
    pub n_circulant: BigInt,
    #[serde(with = "decimal")]
    pub n_connected: BigInt,
    pub aut_order: u64,
    pub domain_size: usize,
    pub methods: Methods,
    pub discrepancies: Vec<Discrepancy>,
}

pub const CSV_HEADER: &str = "p,n_total,n_circulant,n_connected";

impl CountReport {
    /// Formula values only.
    pub fn formulas(p: OddPrime) -> Result<Self> {
        let n_total = polya::n_total(p)?;
        let methods = Methods {
            closed_form: Some(n_total.clone()),
            cycle_index_eval: Some(polya::evaluate(&polya::cycle_index_closed_form(p), 2)?),
            ..Methods::default()
        };
        let mut report = Self {
            p: p.get(),
            n_circulant: polya::n_circulant(p)?,
            n_connected: polya::n_connected(p)?,
            n_total,
            aut_order: p.aut_order(),
            domain_size: p.domain_size(),
            methods,
            discrepancies: Vec::new(),
        };
        report.refresh_discrepancies();
        Ok(report)
    }

    /// Formula values plus the brute-force cycle index and Burnside, which
    /// are cheap at any desk-scale `p`.
    pub fn compute(p: OddPrime) -> Result<Self> {
        let mut report = Self::formulas(p)?;
        report.methods.bruteforce_cycle_index_eval = Some(polya::evaluate(&polya::cycle_index_bruteforce(p)?, 2)?);
        report.methods.burnside = Some(oracle::burnside_count(p)?);
        report.refresh_discrepancies();
        Ok(report)
    }

    /// Records the results of an exhaustive sweep and the circulant oracle.
    pub fn add_oracles(&mut self, sweep: &SweepSummary, circulant: BigInt) {
        self.methods.orbit_partition = Some(sweep.orbits.into());
        self.methods.oracle_connected = Some(sweep.connected.into());
        self.methods.oracle_circulant = Some(circulant);
        self.methods.census = Some(DisconnectedCensus {
            a_only_orbits: sweep.disconnected_a_only,
            b_touching_orbits: sweep.disconnected_b_touching,
        });
        self.refresh_discrepancies();
    }

    /// Rebuilds the discrepancy list: every route that ran is compared with
    /// the formula value of the quantity it computes.
    pub fn refresh_discrepancies(&mut self) {
        let m = &self.methods;
        let comparisons = [
            ("n_total", "closed_form", &self.n_total, "cycle_index_eval", &m.cycle_index_eval),
            ("n_total", "closed_form", &self.n_total, "bruteforce_cycle_index_eval", &m.bruteforce_cycle_index_eval),
            ("n_total", "closed_form", &self.n_total, "burnside", &m.burnside),
            ("n_total", "closed_form", &self.n_total, "orbit_partition", &m.orbit_partition),
            ("n_circulant", "closed_form", &self.n_circulant, "oracle_circulant", &m.oracle_circulant),
            ("n_connected", "closed_form", &self.n_connected, "oracle_connected", &m.oracle_connected),
        ];
        self.discrepancies = comparisons
            .into_iter()
            .filter_map(|(quantity, a, va, b, vb)| {
                let vb = vb.as_ref()?;
                (va != vb).then(|| Discrepancy {
                    quantity: quantity.into(),
                    method_a: a.into(),
                    value_a: va.clone(),
                    method_b: b.into(),
                    value_b: vb.clone(),
                })
            })
            .collect();
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.p, self.n_total, self.n_circulant, self.n_connected)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

impl fmt::Display for CountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p = {}", self.p)?;
        writeln!(f, "|Aut| = {}", self.aut_order)?;
        writeln!(f, "|D| = {}", self.domain_size)?;
        writeln!(f, "N  = {}", self.n_total)?;
        writeln!(f, "Nc = {}", self.n_circulant)?;
        writeln!(f, "N' = {}", self.n_connected)?;
        let m = &self.methods;
        let routes = [
            ("cycle index (closed form) at 2", &m.cycle_index_eval),
            ("cycle index (brute force) at 2", &m.bruteforce_cycle_index_eval),
            ("Burnside", &m.burnside),
            ("orbit partition", &m.orbit_partition),
            ("circulant oracle", &m.oracle_circulant),
            ("connected oracle", &m.oracle_connected),
        ];
        for (name, v) in routes {
            if let Some(v) = v {
                writeln!(f, "  {name}: {v}")?;
            }
        }
        if let Some(c) = &m.census {
            writeln!(f, "  disconnected orbits: {} inside <a>, {} meeting B", c.a_only_orbits, c.b_touching_orbits)?;
        }
        for d in &self.discrepancies {
            writeln!(f, "discrepancy: {d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    /// A formula disagrees with an independent computation.
    Flagged,
    /// The crate disagrees with itself.
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Flagged => "flagged",
            Status::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub details: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub p: u64,
    pub level: Level,
    pub checks: Vec<Check>,
    pub counts: CountReport,
}

impl VerificationReport {
    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{:>7}] {}: {}", c.status, c.name, c.details)?;
        }
        write!(f, "{}", self.counts)
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &str, status: Status, details: impl Into<String>) {
        self.0.push(Check { name: name.into(), status, details: details.into() });
    }

    /// Pass on agreement, otherwise `on_mismatch`.
    fn compare<T: PartialEq + fmt::Display>(&mut self, name: &str, a: (&str, &T), b: (&str, &T), on_mismatch: Status) {
        let status = if a.1 == b.1 { Status::Pass } else { on_mismatch };
        self.push(name, status, format!("{} = {}, {} = {}", a.0, a.1, b.0, b.1));
    }
}

/// Runs the consistency checks for one prime.
///
/// Disagreements between a closed formula and an independent computation are
/// `flagged`; disagreements between two routes that should agree by
/// construction are `fail`.
pub fn verify(p: OddPrime, level: Level, sweep: &SweepOptions) -> Result<VerificationReport> {
    if level == Level::Full {
        // refuse before doing any work
        if p.get() > sweep.cap || p.get() > oracle::MAX_SWEEP_P {
            return Err(Error::AboveOracleCap { p: p.get(), cap: sweep.cap.min(oracle::MAX_SWEEP_P) });
        }
    }
    let mut checks = Checks::default();
    let n = p.domain_size();

    let auts = enumerate_aut(p);
    let table = ActionTable::cached(p)?;
    checks.compare(
        "aut_order",
        ("enumerated", &(auts.len() as u64)),
        ("4p(p-1)", &p.aut_order()),
        Status::Fail,
    );

    let mut bad_degree = 0;
    let mut differing = Vec::new();
    for (f, perm) in table.iter() {
        let brute = perm.cycle_type();
        let closed = closed_form_cycle_type(f);
        if brute.weighted_degree() != n || closed.weighted_degree() != n {
            bad_degree += 1;
        }
        if brute != closed {
            differing.push((f, closed, brute));
        }
    }
    checks.push(
        "cycle_type_degree",
        if bad_degree == 0 { Status::Pass } else { Status::Fail },
        format!("{bad_degree} cycle types without weighted degree {n}"),
    );
    let details = match differing.first() {
        None => format!("all {} closed-form cycle types match", auts.len()),
        Some((f, closed, brute)) => format!(
            "{} of {} differ; first {f}: closed form {closed}, decomposed {brute}",
            differing.len(),
            auts.len()
        ),
    };
    checks.push(
        "cycle_types_closed_vs_bruteforce",
        if differing.is_empty() { Status::Pass } else { Status::Flagged },
        details,
    );

    let closed_poly = polya::cycle_index_closed_form(p);
    let piecewise_poly = polya::cycle_index_from_closed_forms(p);
    let brute_poly = polya::cycle_index_bruteforce(p)?;
    checks.push(
        "cycle_index_closed_vs_piecewise",
        if closed_poly == piecewise_poly { Status::Pass } else { Status::Fail },
        format!("closed expression has {} terms, averaged closed-form types give {}", closed_poly.poly().len(), piecewise_poly.poly().len()),
    );
    checks.push(
        "cycle_index_closed_vs_bruteforce",
        if closed_poly == brute_poly { Status::Pass } else { Status::Flagged },
        format!("closed expression has {} terms, brute force {}", closed_poly.poly().len(), brute_poly.poly().len()),
    );
    for (name, poly) in [("cycle_index_invariants_closed", &closed_poly), ("cycle_index_invariants_bruteforce", &brute_poly)] {
        match poly.check_invariants() {
            Ok(()) => checks.push(name, Status::Pass, "positive, sums to 1, weighted degree 4p"),
            Err(e) => checks.push(name, Status::Fail, e.to_string()),
        }
    }

    let mut counts = CountReport::compute(p)?;
    let m = counts.methods.clone();
    let (eval_closed, eval_brute, burnside) = (
        m.cycle_index_eval.expect("computed"),
        m.bruteforce_cycle_index_eval.expect("computed"),
        m.burnside.expect("computed"),
    );
    checks.compare("formula_vs_cycle_index", ("N", &counts.n_total), ("P_closed(2)", &eval_closed), Status::Fail);
    checks.compare("bruteforce_cycle_index_vs_burnside", ("P_brute(2)", &eval_brute), ("Burnside", &burnside), Status::Fail);
    checks.compare("burnside_vs_formula", ("Burnside", &burnside), ("N", &counts.n_total), Status::Flagged);

    if level == Level::Full {
        let summary = oracle::sweep(p, sweep)?;
        let circulant = oracle::circulant_orbit_count(p)?;
        counts.add_oracles(&summary, circulant.clone());
        let orbits = BigInt::from(summary.orbits);
        checks.compare("orbit_partition_vs_burnside", ("orbits", &orbits), ("Burnside", &burnside), Status::Fail);
        checks.compare("orbit_partition_vs_formula", ("orbits", &orbits), ("N", &counts.n_total), Status::Flagged);
        let disconnected = summary.disconnected_a_only + summary.disconnected_b_touching;
        checks.push(
            "partition_identities",
            if summary.connected + disconnected == summary.orbits { Status::Pass } else { Status::Fail },
            format!(
                "connected {} + disconnected {} (= {} inside <a> + {} meeting B) against {} orbits",
                summary.connected, disconnected, summary.disconnected_a_only, summary.disconnected_b_touching, summary.orbits
            ),
        );
        checks.compare("circulant_oracle_vs_formula", ("oracle", &circulant), ("Nc", &counts.n_circulant), Status::Flagged);
        checks.compare(
            "connected_oracle_vs_formula",
            ("oracle", &BigInt::from(summary.connected)),
            ("N'", &counts.n_connected),
            Status::Flagged,
        );
        let nc = &counts.n_circulant;
        checks.compare(
            "a_only_vs_nc_squared",
            ("oracle", &BigInt::from(summary.disconnected_a_only)),
            ("Nc^2", &(nc * nc)),
            Status::Flagged,
        );
        checks.compare(
            "b_touching_vs_eight",
            ("oracle", &summary.disconnected_b_touching),
            ("listed", &8),
            Status::Flagged,
        );
    }

    Ok(VerificationReport { p: p.get(), level, checks: checks.0, counts })
}

/// Plain-text table with one row per prime.
pub fn render_table(reports: &[CountReport]) -> String {
    let mut out = format!("{:>3} {:>16} {:>6} {:>16}\n", "p", "N", "Nc", "N'");
    for r in reports {
        let _ = writeln!(out, "{:>3} {:>16} {:>6} {:>16}", r.p, r.n_total, r.n_circulant, r.n_connected);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    #[test]
    fn formula_report_p3() {
        let r = CountReport::formulas(p(3)).unwrap();
        assert_eq!(r.n_total, BigInt::from(432));
        assert_eq!(r.n_circulant, BigInt::from(6));
        assert_eq!(r.n_connected, BigInt::from(388));
        assert_eq!(r.aut_order, 24);
        assert_eq!(r.domain_size, 12);
        assert!(r.discrepancies.is_empty());
        assert_eq!(r.csv_row(), "3,432,6,388");
    }

    #[test]
    fn burnside_disagreement_is_recorded() {
        let r = CountReport::compute(p(3)).unwrap();
        assert_eq!(r.methods.burnside, Some(BigInt::from(624)));
        assert!(r.discrepancies.iter().any(|d| d.method_b == "burnside" && d.value_b == BigInt::from(624)));
    }

    #[test]
    fn json_counts_are_strings_and_round_trip() {
        let r = CountReport::compute(p(13)).unwrap();
        let json = r.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["n_total"], "7330997009984");
        assert_eq!(v["p"], 13);
        assert!(v["methods"]["orbit_partition"].is_null());
        let back: CountReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn full_verification_refuses_above_cap() {
        let err = verify(p(7), Level::Full, &SweepOptions::default()).unwrap_err();
        assert_eq!(err, Error::AboveOracleCap { p: 7, cap: 5 });
    }

    #[test]
    fn quick_verification_has_no_internal_failures() {
        for pr in [3, 5, 7].map(p) {
            let r = verify(pr, Level::Quick, &SweepOptions::default()).unwrap();
            assert!(!r.has_failures(), "{r}");
            assert_eq!(r.check("burnside_vs_formula").unwrap().status, Status::Flagged);
        }
    }
}
