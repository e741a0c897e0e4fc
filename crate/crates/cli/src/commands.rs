use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use holecount::construction::{
    build_body, build_warmup_family, choose_epsilon, predicted_nerve, validate_epsilon,
    verify_witnesses, EpsilonRecord, ParamsRecord, UniversalBody, ValidatedFamily, WarmupRecord,
    WitnessReport,
};
use holecount::exact_math::{format_rational, int, ExactScalar, Vec3};
use holecount::geometry::{convex_hull, Role, Translate, TranslateFamily};
use holecount::oracle::{default_resolution, fit_resolution, oracle_hole_count, OracleReport, DEFAULT_CELL_BUDGET};
use holecount::topology::{
    binomial, hole_count, upper_bound_holds, BettiReport, HoleReport, NerveDiff,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::report::{computed, expected, oracle, Report, Tagged};
use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct OffsetRecord {
    pub name: String,
    pub offset: String,
}

fn offsets(family: &TranslateFamily) -> Vec<OffsetRecord> {
    family
        .translates()
        .iter()
        .map(|t| OffsetRecord {
            name: t.name(),
            offset: t.offset().to_string(),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BodySummary {
    pub vertices: usize,
    pub facets: usize,
    /// Plane strictly separating the front and back point sets.
    pub separator_normal: String,
    pub separator_offset: String,
}

fn body_summary(body: &UniversalBody) -> BodySummary {
    BodySummary {
        vertices: body.body.vertices().len(),
        facets: body.body.facets().len(),
        separator_normal: body.separator.normal.to_string(),
        separator_offset: format_rational(&body.separator.offset),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsilonSection {
    /// `"search"` for the halving search, `"override"` for a given value.
    pub source: String,
    pub eps: String,
    pub search: Option<EpsilonRecord>,
}

/// Builds the body and a family whose nerve was computed, either with the
/// given step or with the validated halving search.
fn universal_family(config: &RunConfig) -> Result<(UniversalBody, ValidatedFamily, EpsilonSection), CliError> {
    let params = config.params(2)?;
    let body = build_body(&params)?;
    let (validated, section) = match config.eps()? {
        Some(eps) => {
            let v = validate_epsilon(&body, &eps)?;
            let section = EpsilonSection {
                source: "override".into(),
                eps: format_rational(&eps),
                search: None,
            };
            (v, section)
        }
        None => {
            let (budget, v) = choose_epsilon(&body)?;
            let section = EpsilonSection {
                source: "search".into(),
                eps: format_rational(&budget.eps),
                search: Some(budget.to_record()),
            };
            (v, section)
        }
    };
    Ok((body, validated, section))
}

#[derive(Clone, Debug, Serialize)]
pub struct Identities {
    pub holes: bool,
    pub two_simplices: bool,
    pub betti2: bool,
    pub upper_bound: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HolesReport {
    pub params: ParamsRecord,
    pub body: BodySummary,
    pub epsilon: EpsilonSection,
    pub offsets: Vec<OffsetRecord>,
    pub nerve: NerveDiff,
    pub simplex_counts: Tagged<Vec<usize>>,
    pub two_simplices: Tagged<u64>,
    pub expected_two_simplices: Tagged<u64>,
    pub betti2: Tagged<BettiReport>,
    pub expected_betti2: Tagged<u64>,
    /// Includes the unbounded component.
    pub holes: Tagged<u64>,
    pub expected_holes: Tagged<u64>,
    pub upper_bound: Tagged<u64>,
    pub witnesses: WitnessReport,
    pub identities: Identities,
    #[serde(skip)]
    pub hole_report: HoleReport,
}

impl Report for HolesReport {
    fn exit_code(&self) -> i32 {
        if !self.nerve.matches || !self.witnesses.all_passed() {
            return 2;
        }
        let i = &self.identities;
        if i.holes && i.two_simplices && i.betti2 && i.upper_bound {
            0
        } else {
            3
        }
    }

    fn csv(&self) -> Option<String> {
        Some(format!(
            "{}\n{}\n",
            HoleReport::csv_header(),
            self.hole_report.csv_row(self.params.m)
        ))
    }
}

/// Full pipeline on the `3m` translates: body, validated step, nerve,
/// `β_2`, witness points, and the closed-form identities.
pub fn cmd_holes(config: &RunConfig) -> Result<HolesReport, CliError> {
    let (body, v, epsilon) = universal_family(config)?;
    let m = body.params.m;
    let prediction = predicted_nerve(m);
    let report = HoleReport::from_complex(&v.complex)?.with_prediction(prediction.expected_holes());
    let witnesses = verify_witnesses(&body, &v.family, &v.eps);
    let two = report.simplex_counts[2] as u64;
    let identities = Identities {
        holes: report.holes == prediction.expected_holes(),
        two_simplices: two == prediction.expected_two_simplices(),
        betti2: report.betti2.betti as u64 == prediction.expected_betti2(),
        upper_bound: upper_bound_holds(&report),
    };
    Ok(HolesReport {
        params: body.params.to_record(),
        body: body_summary(&body),
        epsilon,
        offsets: offsets(&v.family),
        nerve: v.diff.clone(),
        simplex_counts: computed(report.simplex_counts.clone()),
        two_simplices: computed(two),
        expected_two_simplices: expected(prediction.expected_two_simplices()),
        betti2: computed(report.betti2.clone()),
        expected_betti2: expected(prediction.expected_betti2()),
        holes: computed(report.holes),
        expected_holes: expected(prediction.expected_holes()),
        upper_bound: expected(report.upper_bound),
        witnesses,
        identities,
        hole_report: report,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WarmupReport {
    pub layout: WarmupRecord,
    pub offsets: Vec<OffsetRecord>,
    /// Deepest common points of consecutive `B`s lie in both.
    pub contacts_ok: bool,
    pub simplex_counts: Tagged<Vec<usize>>,
    pub holes: Tagged<u64>,
    /// `m(m-1)` bounded grid cells.
    pub lower_bound: Tagged<u64>,
    pub oracle: Option<OracleSection>,
    pub lower_bound_holds: bool,
    #[serde(skip)]
    pub hole_report: HoleReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSection {
    pub counts: Tagged<OracleReport>,
    /// Stable and equal to the homological count.
    pub agrees: bool,
}

impl Report for WarmupReport {
    fn exit_code(&self) -> i32 {
        let oracle_ok = self.oracle.as_ref().is_none_or(|o| o.agrees);
        if self.contacts_ok && self.lower_bound_holds && oracle_ok {
            0
        } else {
            3
        }
    }

    fn csv(&self) -> Option<String> {
        Some(format!(
            "{}\n{}\n",
            HoleReport::csv_header(),
            self.hole_report.csv_row(self.layout.m)
        ))
    }
}

/// Oracle cell size for the warm-up family: a quarter of the spacing
/// `ell/m` between neighbouring `A` translates, coarsened in 5% steps only as
/// far as needed to keep the refined grid inside the cell budget.
pub fn warmup_resolution(family: &TranslateFamily, ell: &ExactScalar, m: usize) -> ExactScalar {
    let preferred = default_resolution(&(ell / int(m as i64)));
    fit_resolution(family, &preferred, DEFAULT_CELL_BUDGET, 40)
}

/// The warm-up family for `m >= 2`: hole count, the `m(m-1)` lower bound,
/// and (unless `with_oracle` is false) the voxel count at the configured or
/// default resolution.
pub fn cmd_warmup(config: &RunConfig, with_oracle: bool) -> Result<WarmupReport, CliError> {
    let m = config.m_or(2);
    let (spec, family) = build_warmup_family(m)?;
    let contacts_ok = spec.b_contacts.iter().enumerate().all(|(j, p)| {
        let (a, b) = (family.find(Role::B, j + 1), family.find(Role::B, j + 2));
        a.is_some_and(|t| t.contains(p)) && b.is_some_and(|t| t.contains(p))
    });
    let report = hole_count(&family)?;
    let lower = (m * (m - 1)) as u64;
    let oracle_section = if with_oracle {
        let h = match config.resolution()? {
            Some(h) => h,
            None => warmup_resolution(&family, &spec.ell, m),
        };
        let counts = oracle_hole_count(&family, &h, DEFAULT_CELL_BUDGET)?;
        Some(OracleSection {
            agrees: counts.stable && counts.count == report.holes,
            counts: oracle(counts),
        })
    } else {
        None
    };
    Ok(WarmupReport {
        layout: spec.to_record(),
        offsets: offsets(&family),
        contacts_ok,
        simplex_counts: computed(report.simplex_counts.clone()),
        holes: computed(report.holes),
        lower_bound: expected(lower),
        oracle: oracle_section,
        lower_bound_holds: report.holes >= lower,
        hole_report: report,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RandomTrial {
    pub trial: usize,
    pub family_size: usize,
    pub holes: Tagged<u64>,
    pub bound: Tagged<u64>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RandomBoundReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub results: Vec<RandomTrial>,
    pub max_holes: u64,
    pub all_hold: bool,
}

impl Report for RandomBoundReport {
    fn exit_code(&self) -> i32 {
        if self.all_hold {
            0
        } else {
            3
        }
    }

    fn csv(&self) -> Option<String> {
        let mut out = String::from("trial,n,holes,bound,holds\n");
        for r in &self.results {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.trial, r.family_size, r.holes.value, r.bound.value, r.holds
            ));
        }
        Some(out)
    }
}

/// A random full-dimensional hull of eight lattice points in `[0, 6]^3`,
/// moved by a random lattice offset in `[0, 4]^3`.
fn random_translate(rng: &mut ChaCha8Rng, index: usize) -> Translate {
    loop {
        let pts: Vec<Vec3> = (0..8)
            .map(|_| Vec3::from_ints(rng.gen_range(0..=6), rng.gen_range(0..=6), rng.gen_range(0..=6)))
            .collect();
        let offset = Vec3::from_ints(rng.gen_range(0..=4), rng.gen_range(0..=4), rng.gen_range(0..=4));
        if let Ok(body) = convex_hull(&pts) {
            return Translate::new(Arc::new(body.with_label(format!("R{index}"))), offset, Role::Generic, index);
        }
    }
}

/// `trials` seeded families of between 1 and `n` random hulls; checks the
/// `C(n,3) + 1` bound on each.
pub fn cmd_random_bound(n: usize, trials: usize, seed: u64) -> Result<RandomBoundReport, CliError> {
    if n == 0 {
        return Err(CliError::Input("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::with_capacity(trials);
    for trial in 0..trials {
        let size = rng.gen_range(1..=n);
        let members = (1..=size).map(|i| random_translate(&mut rng, i)).collect();
        let family = TranslateFamily::new(members)?;
        let report = hole_count(&family)?;
        results.push(RandomTrial {
            trial,
            family_size: size,
            holes: computed(report.holes),
            bound: expected(binomial(size as u64, 3) + 1),
            holds: upper_bound_holds(&report),
        });
    }
    Ok(RandomBoundReport {
        n,
        trials,
        seed,
        max_holes: results.iter().map(|r| r.holes.value).max().unwrap_or(0),
        all_hold: results.iter().all(|r| r.holds),
        results,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportReport {
    pub directory: String,
    pub digits: usize,
    pub eps: String,
    pub files: Vec<String>,
    pub offsets: Vec<OffsetRecord>,
}

impl Report for ExportReport {
    fn exit_code(&self) -> i32 {
        0
    }
}

/// Writes `body.obj` and one mesh per translate into `dir` (created if missing).
pub fn cmd_export(config: &RunConfig, dir: &Path) -> Result<ExportReport, CliError> {
    let (body, v, epsilon) = universal_family(config)?;
    let digits = config.digits.unwrap_or(9);
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let write = |name: String, text: String, files: &mut Vec<String>| -> Result<(), CliError> {
        fs::write(dir.join(&name), text)?;
        files.push(name);
        Ok(())
    };
    write("body.obj".into(), body.body.to_obj(&Vec3::zero(), digits), &mut files)?;
    for t in v.family.translates() {
        let obj = t.body().as_ref().clone().with_label(t.name()).to_obj(t.offset(), digits);
        write(format!("{}.obj", t.name()), obj, &mut files)?;
    }
    Ok(ExportReport {
        directory: dir.display().to_string(),
        digits,
        eps: epsilon.eps,
        files,
        offsets: offsets(&v.family),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleRunReport {
    pub family: String,
    pub m: usize,
    pub eps: Option<String>,
    pub holes: Tagged<u64>,
    pub oracle: OracleSection,
}

impl Report for OracleRunReport {
    fn exit_code(&self) -> i32 {
        if self.oracle.agrees {
            0
        } else {
            3
        }
    }
}

/// Voxel count next to the homological count, for the warm-up family
/// (`family = warmup`) or the `3m` translates (default).
pub fn cmd_oracle(config: &RunConfig) -> Result<OracleRunReport, CliError> {
    let kind = config.family.clone().unwrap_or_else(|| "universal".into());
    let (family, holes, h, eps, m) = match kind.as_str() {
        "warmup" => {
            let m = config.m_or(3);
            let (spec, family) = build_warmup_family(m)?;
            let holes = hole_count(&family)?.holes;
            let h = config.resolution()?.unwrap_or_else(|| warmup_resolution(&family, &spec.ell, m));
            (family, holes, h, None, m)
        }
        "universal" => {
            let (body, v, section) = universal_family(config)?;
            let holes = HoleReport::from_complex(&v.complex)?.holes;
            let h = config.resolution()?.unwrap_or_else(|| default_resolution(&v.eps));
            (v.family, holes, h, Some(section.eps), body.params.m)
        }
        other => return Err(CliError::Input(format!("unknown family {other:?}; use warmup or universal"))),
    };
    let counts = oracle_hole_count(&family, &h, DEFAULT_CELL_BUDGET)?;
    Ok(OracleRunReport {
        family: kind,
        m,
        eps,
        holes: computed(holes),
        oracle: OracleSection {
            agrees: counts.stable && counts.count == holes,
            counts: oracle(counts),
        },
    })
}

/// Writes `<dir>/<stem>.json` and, when the report has one, `<dir>/<stem>.csv`.
pub fn write_outputs<R: Report>(dir: &Path, stem: &str, json: &str, report: &R) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir)?;
    let mut written = vec![dir.join(format!("{stem}.json"))];
    fs::write(&written[0], json)?;
    if let Some(csv) = report.csv() {
        let path = dir.join(format!("{stem}.csv"));
        fs::write(&path, csv)?;
        written.push(path);
    }
    Ok(written)
}
