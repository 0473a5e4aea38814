//! Report assembly for the command-line front end: single-point analysis,
//! noise sweeps and the (F, D)-plane region data, each renderable as JSON
//! or CSV.
//!
//! CSV floats are written with 17 significant digits so a parsed value
//! equals the computed double bit for bit; JSON goes through serde_json,
//! whose shortest-form float encoding round-trips exactly as well.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measures::{
    average_fidelity, classify_channel, d_bounds, f_bounds, fidelity_deviation, half_circle_bound,
    region_triangle, ChannelClass, RegionTriangle, ThresholdConstants, F_CLASSICAL, P_CHSH,
    P_SEPARABILITY,
};
use crate::montecarlo::{mc_average_fidelity, mc_fidelity_deviation, Estimate, SamplerConfig};
use crate::scenario::Scenario;
use crate::teleport::WernerChannel;

/// Output rendering for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Monte-Carlo cross-check attached to a report on request.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimates {
    #[serde(rename = "F")]
    pub f: Estimate,
    #[serde(rename = "D")]
    pub d: Estimate,
}

/// Everything the analyze command reports for one (scenario, p) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub p: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "F_min")]
    pub f_min: f64,
    #[serde(rename = "F_max")]
    pub f_max: f64,
    #[serde(rename = "D_lower")]
    pub d_lower: f64,
    #[serde(rename = "D_upper")]
    pub d_upper: f64,
    #[serde(rename = "half_circle_at_F")]
    pub half_circle_at_f: f64,
    pub classification: ChannelClass,
    pub region_vertices: [(f64, f64); 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc: Option<McEstimates>,
}

/// Analyze one scenario at noise p, optionally attaching MC estimates.
pub fn analyze(scenario: &Scenario, p: f64, mc: Option<&SamplerConfig>) -> Result<RunReport> {
    let channel = WernerChannel::new(p)?;
    let config = scenario.to_config()?;
    let f = average_fidelity(&config, &channel);
    let d = fidelity_deviation(&config, &channel)?;
    let (f_min, f_max) = f_bounds(&channel);
    let (d_lower, d_upper) = d_bounds(&config, &channel);
    let mc = mc.map(|sampler| McEstimates {
        f: mc_average_fidelity(&config, &channel, sampler),
        d: mc_fidelity_deviation(&config, &channel, sampler),
    });
    Ok(RunReport {
        scenario: scenario.name(),
        p,
        f,
        d,
        f_min,
        f_max,
        d_lower,
        d_upper,
        half_circle_at_f: half_circle_bound(f)?,
        classification: classify_channel(&channel),
        region_vertices: region_triangle(&channel).vertices(),
        mc,
    })
}

const REPORT_CSV_HEADER: &str = "scenario,p,F,D,F_min,F_max,D_lower,D_upper,half_circle_at_F,\
classification,v0_F,v0_D,v1_F,v1_D,v2_F,v2_D,mc_F,mc_F_std_error,mc_D,mc_D_std_error,mc_n";

pub fn render_report(report: &RunReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(to_pretty_json(report)?),
        OutputFormat::Csv => {
            let mut row = vec![
                report.scenario.clone(),
                fmt_f64(report.p),
                fmt_f64(report.f),
                fmt_f64(report.d),
                fmt_f64(report.f_min),
                fmt_f64(report.f_max),
                fmt_f64(report.d_lower),
                fmt_f64(report.d_upper),
                fmt_f64(report.half_circle_at_f),
                report.classification.to_string(),
            ];
            for (f, d) in report.region_vertices {
                row.push(fmt_f64(f));
                row.push(fmt_f64(d));
            }
            match &report.mc {
                Some(mc) => {
                    row.push(fmt_f64(mc.f.mean));
                    row.push(fmt_f64(mc.f.std_error));
                    row.push(fmt_f64(mc.d.mean));
                    row.push(fmt_f64(mc.d.std_error));
                    row.push(mc.f.n.to_string());
                }
                None => row.extend(std::iter::repeat_n(String::new(), 5)),
            }
            Ok(format!("{REPORT_CSV_HEADER}\n{}\n", row.join(",")))
        }
    }
}

/// One row of a noise sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "F_min")]
    pub f_min: f64,
    #[serde(rename = "F_max")]
    pub f_max: f64,
    #[serde(rename = "D_upper")]
    pub d_upper: f64,
}

/// Evaluate the scenario on a uniform p grid with `steps` points.
pub fn sweep(scenario: &Scenario, p_start: f64, p_end: f64, steps: usize) -> Result<Vec<SweepRow>> {
    if steps < 2 {
        return Err(crate::error::Error::arg(format!(
            "steps = {steps} must be at least 2"
        )));
    }
    if !(0.0..=1.0).contains(&p_start) || !(0.0..=1.0).contains(&p_end) || p_start >= p_end {
        return Err(crate::error::Error::arg(format!(
            "sweep range [{p_start}, {p_end}] must satisfy 0 <= start < end <= 1"
        )));
    }
    let config = scenario.to_config()?;
    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let t = i as f64 / (steps - 1) as f64;
        let p = p_start + t * (p_end - p_start);
        let channel = WernerChannel::new(p)?;
        let (f_min, f_max) = f_bounds(&channel);
        let (_, d_upper) = d_bounds(&config, &channel);
        rows.push(SweepRow {
            p,
            f: average_fidelity(&config, &channel),
            d: fidelity_deviation(&config, &channel)?,
            f_min,
            f_max,
            d_upper,
        });
    }
    Ok(rows)
}

pub fn render_sweep(rows: &[SweepRow], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(to_pretty_json(&rows)?),
        OutputFormat::Csv => {
            let mut out = String::from("p,F,D,F_min,F_max,D_upper\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_f64(r.p),
                    fmt_f64(r.f),
                    fmt_f64(r.d),
                    fmt_f64(r.f_min),
                    fmt_f64(r.f_max),
                    fmt_f64(r.d_upper)
                ));
            }
            Ok(out)
        }
    }
}

/// Number of samples on the half-circle curve D = √(F(1−F)).
pub const HALF_CIRCLE_POINTS: usize = 201;

/// Everything needed to redraw the (F, D)-plane figure: the requested
/// triangles, the universal half-circle, the threshold-channel triangles
/// (p = 1/3 and p = 1/√2) and the classical-fidelity vertical at F = 2/3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionData {
    pub triangles: Vec<RegionTriangle>,
    pub half_circle: Vec<(f64, f64)>,
    pub thresholds: ThresholdConstants,
    pub separability_triangle: RegionTriangle,
    pub chsh_triangle: RegionTriangle,
    pub f_classical_line: [(f64, f64); 2],
}

/// Region geometry for each requested noise level.
pub fn region(p_list: &[f64]) -> Result<RegionData> {
    let mut triangles = Vec::with_capacity(p_list.len());
    for &p in p_list {
        triangles.push(region_triangle(&WernerChannel::new(p)?));
    }
    let half_circle = (0..HALF_CIRCLE_POINTS)
        .map(|i| {
            let f = i as f64 / (HALF_CIRCLE_POINTS - 1) as f64;
            (f, (f * (1.0 - f)).sqrt())
        })
        .collect();
    Ok(RegionData {
        triangles,
        half_circle,
        thresholds: ThresholdConstants::STANDARD,
        separability_triangle: region_triangle(&WernerChannel::new(P_SEPARABILITY)?),
        chsh_triangle: region_triangle(&WernerChannel::new(P_CHSH)?),
        f_classical_line: [(F_CLASSICAL, 0.0), (F_CLASSICAL, 0.5)],
    })
}

pub fn render_region(data: &RegionData, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(to_pretty_json(data)?),
        OutputFormat::Csv => {
            let mut out = String::from("series,p,F,D\n");
            let mut triangle_rows = |label: &str, t: &RegionTriangle| {
                for (f, d) in t.vertices() {
                    out.push_str(&format!(
                        "{label},{},{},{}\n",
                        fmt_f64(t.p),
                        fmt_f64(f),
                        fmt_f64(d)
                    ));
                }
            };
            for t in &data.triangles {
                triangle_rows("triangle", t);
            }
            triangle_rows("separability_triangle", &data.separability_triangle);
            triangle_rows("chsh_triangle", &data.chsh_triangle);
            for (f, d) in &data.half_circle {
                out.push_str(&format!("half_circle,,{},{}\n", fmt_f64(*f), fmt_f64(*d)));
            }
            for (f, d) in data.f_classical_line {
                out.push_str(&format!("f_classical,,{},{}\n", fmt_f64(f), fmt_f64(d)));
            }
            Ok(out)
        }
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    serde_json::to_string_pretty(value).map(|mut s| {
        s.push('\n');
        s
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::SamplerConfig;

    #[test]
    fn analyze_optimal_extremes() {
        let r = analyze(&Scenario::Optimal, 1.0, None).unwrap();
        assert_eq!(r.f, 1.0);
        assert_eq!(r.d, 0.0);
        assert_eq!(r.classification, ChannelClass::ChshViolating);
        assert_eq!(r.half_circle_at_f, 0.0);

        let r = analyze(&Scenario::Optimal, 0.0, None).unwrap();
        assert_eq!(r.f, 0.5);
        assert_eq!(r.d, 0.0);
        assert_eq!(r.classification, ChannelClass::Separable);
        assert!(r.mc.is_none());
    }

    #[test]
    fn analyze_worst_case_vertex() {
        let scenario = Scenario::parse("permuted:1032").unwrap();
        let r = analyze(&scenario, 1.0, None).unwrap();
        assert!((r.f - 1.0 / 3.0).abs() < 1e-12);
        assert!((r.d - 2.0 / (3.0 * 5f64.sqrt())).abs() < 1e-12);
        assert!((r.d - 0.298142).abs() < 1e-6);
        // the analytic point sits on the region triangle's top vertex
        let (vf, vd) = r.region_vertices[2];
        assert!((r.f - vf).abs() < 1e-12 && (r.d - vd).abs() < 1e-12);
    }

    #[test]
    fn analyze_rejects_bad_p() {
        assert!(analyze(&Scenario::Optimal, 1.5, None).is_err());
    }

    #[test]
    fn analyze_with_mc_attaches_estimates() {
        let sampler = SamplerConfig::new(4, 20_000).unwrap();
        let r = analyze(&Scenario::Optimal, 0.5, Some(&sampler)).unwrap();
        let mc = r.mc.unwrap();
        // constant integrand: the mean is exact to rounding and the standard
        // error collapses, so compare absolutely rather than in sigmas
        assert!((mc.f.mean - 0.75).abs() < 1e-12);
        assert!(mc.d.mean < 1e-12);
        assert_eq!(mc.f.n, 20_000);

        let noisy = analyze(&Scenario::parse("random:3").unwrap(), 0.8, Some(&sampler)).unwrap();
        let got = noisy.mc.unwrap();
        assert!(got.f.sigmas_from(noisy.f) < 4.0);
        assert!(got.d.sigmas_from(noisy.d) < 4.0);
    }

    #[test]
    fn report_renders_deterministically() {
        let sampler = SamplerConfig::new(9, 10_000).unwrap();
        let r1 = analyze(&Scenario::Optimal, 0.5, Some(&sampler)).unwrap();
        let r2 = analyze(&Scenario::Optimal, 0.5, Some(&sampler)).unwrap();
        for fmt in [OutputFormat::Json, OutputFormat::Csv] {
            assert_eq!(
                render_report(&r1, fmt).unwrap(),
                render_report(&r2, fmt).unwrap()
            );
        }
        let csv = render_report(&r1, OutputFormat::Csv).unwrap();
        assert!(csv.starts_with("scenario,p,F,D,"));
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn csv_floats_round_trip() {
        let r = analyze(&Scenario::parse("random:12").unwrap(), 0.637, None).unwrap();
        let csv = render_report(&r, OutputFormat::Csv).unwrap();
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[2].parse::<f64>().unwrap(), r.f);
        assert_eq!(row[3].parse::<f64>().unwrap(), r.d);
    }

    #[test]
    fn sweep_grids() {
        let rows = sweep(&Scenario::Optimal, 0.0, 1.0, 11).unwrap();
        assert_eq!(rows.len(), 11);
        for (i, row) in rows.iter().enumerate() {
            let p = i as f64 * 0.1;
            assert!((row.p - p).abs() < 1e-15);
            assert!((row.f - (1.0 + p) / 2.0).abs() < 1e-12);
            assert!(row.d.abs() < 1e-14);
        }
        assert_eq!(rows[0].f, 0.5);
        assert!((rows[10].f - 1.0).abs() < 1e-15);

        // worst case: D runs 0 -> 2/(3√5) linearly
        let rows = sweep(&Scenario::parse("permuted").unwrap(), 0.0, 1.0, 11).unwrap();
        let d_max = 2.0 / (3.0 * 5f64.sqrt());
        for (i, row) in rows.iter().enumerate() {
            assert!((row.d - i as f64 * 0.1 * d_max).abs() < 1e-12);
        }

        assert!(sweep(&Scenario::Optimal, 0.0, 0.0, 2).is_err());
        assert!(sweep(&Scenario::Optimal, 0.0, 1.0, 1).is_err());
        assert!(sweep(&Scenario::Optimal, 0.8, 0.2, 5).is_err());
    }

    #[test]
    fn region_figures() {
        let data = region(&[1.0, P_CHSH, P_SEPARABILITY]).unwrap();
        assert_eq!(data.triangles.len(), 3);
        let t1 = &data.triangles[0];
        assert_eq!(t1.vertices()[0], (1.0, 0.0));
        assert!((t1.vertices()[1].0 - 1.0 / 3.0).abs() < 1e-12);
        assert!((t1.vertices()[2].1 - 0.298142).abs() < 1e-6);

        let tbv = &data.triangles[1];
        assert!((tbv.f_max - 0.853553).abs() < 1e-6);

        let tc = &data.triangles[2];
        assert!((tc.f_max - 0.666666).abs() < 1e-6);
        assert!((tc.f_min - 0.444444).abs() < 1e-6);
        assert!((tc.d_max - 0.099381).abs() < 1e-6);

        // half circle: 201 points, exact value 1/2 at F = 1/2
        assert_eq!(data.half_circle.len(), HALF_CIRCLE_POINTS);
        assert_eq!(data.half_circle[100], (0.5, 0.5));
        assert_eq!(data.half_circle[0], (0.0, 0.0));
        assert_eq!(data.half_circle[200], (1.0, 0.0));

        assert_eq!(data.f_classical_line[0].0, F_CLASSICAL);

        let csv = render_region(&data, OutputFormat::Csv).unwrap();
        assert!(csv.starts_with("series,p,F,D\n"));
        // 3 requested + 2 reference triangles, 3 vertices each, plus curve and line
        assert_eq!(csv.lines().count(), 1 + 15 + HALF_CIRCLE_POINTS + 2);
    }
}
