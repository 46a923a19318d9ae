//! Command implementations: each returns the JSON result object.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{
    CorrelateArgs, Failure, FitPolarizationArgs, FitPowerArgs, G2Args, IntoFailure, MetricsArgs,
    OptimalWaistArgs, SimulateArgs, SweepArgs,
};
use crate::dispersion::DispersionTable;
use crate::io::{read_pts, write_pts, FormatError};
use crate::metrics::{fit_linear, fit_polarization as fit_pol, pair_efficiency, Car, PairMetrics};
use crate::modecoupling::optimal_pump_waist;
use crate::phasematch::{thickness_sweep, RateModel, SpdcConfig};
use crate::simulator::{simulate as run_simulation, SimulationRecord, SourceModel, RNG_ALGORITHM};
use crate::tcspc::{
    accidental_estimate, analyze_coincidences, chunked_coincidence_count, coincidence_count,
    g2_histogram, AccidentalMethod, TimestampStream,
};

fn sha256_hex(path: &Path) -> Result<String, Failure> {
    let bytes = std::fs::read(path).map_err(|e| e.fail().param(&path.display().to_string()))?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// Common result envelope: command name, tool version, input content hashes.
fn envelope(command: &str, inputs: &[&Path]) -> Result<serde_json::Map<String, Value>, Failure> {
    let mut hashes = serde_json::Map::new();
    for path in inputs {
        hashes.insert(path.display().to_string(), json!(sha256_hex(path)?));
    }
    let mut map = serde_json::Map::new();
    map.insert("command".into(), json!(command));
    map.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
    map.insert("input_hashes".into(), Value::Object(hashes));
    Ok(map)
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| e.fail().param(&path.display().to_string()))
}

fn channel_pair(
    path: &Path,
    ch1: u8,
    ch2: u8,
) -> Result<(TimestampStream, TimestampStream), Failure> {
    let streams = read_pts(path).map_err(|e| e.fail().param("--input"))?;
    let pick = |ch: u8, flag: &str| -> Result<TimestampStream, Failure> {
        streams
            .iter()
            .find(|s| s.channel() == ch)
            .cloned()
            .ok_or_else(|| {
                FormatError::MalformedRow {
                    row: 0,
                    reason: format!("channel {ch} not present in {}", path.display()),
                }
                .fail()
                .param(flag)
            })
    };
    Ok((pick(ch1, "--ch1")?, pick(ch2, "--ch2")?))
}

fn car_fields(map: &mut serde_json::Map<String, Value>, car: &Car) {
    map.insert("car".into(), json!(car.value()));
    map.insert("car_error".into(), json!(car.sigma()));
    map.insert("car_is_lower_bound".into(), json!(car.is_lower_bound()));
}

pub(super) fn sweep(args: SweepArgs) -> Result<Value, Failure> {
    let table =
        DispersionTable::from_csv_path(&args.dispersion).map_err(|e| e.fail().param("--dispersion"))?;
    let config = match args.idler {
        Some(idler) => SpdcConfig::new(
            args.pump,
            args.signal,
            idler,
            args.pol_pump,
            args.pol_signal,
            args.pol_idler,
        ),
        None => SpdcConfig::from_pump_signal(
            args.pump,
            args.signal,
            args.pol_pump,
            args.pol_signal,
            args.pol_idler,
        ),
    }
    .map_err(|e| e.fail().param("--pump/--signal/--idler"))?;
    let model = if args.absorbing {
        RateModel::Absorbing
    } else {
        RateModel::Transparent
    };
    let sweep = thickness_sweep(
        &config,
        &table,
        args.thickness_min,
        args.thickness_max,
        args.steps,
        model,
    )
    .map_err(|e| e.fail().param("--thickness-min/--thickness-max"))?;

    let mut csv = String::from("thickness_nm,rate_rel\n");
    for (l, r) in sweep.thicknesses_nm.iter().zip(sweep.rates.iter()) {
        csv.push_str(&format!("{l},{r}\n"));
    }
    write_file(&args.output, csv.as_bytes())?;

    let sidecar = json!({
        "peak_thickness_nm": sweep.peak_thickness_nm,
        "peak_rate_rel": sweep.peak_rate,
        "absorbing": model.is_absorbing(),
    });
    let sidecar_path = args.output.with_extension("json");
    write_file(&sidecar_path, format!("{sidecar:#}\n").as_bytes())?;

    let mut map = envelope("sweep", &[args.dispersion.as_path()])?;
    map.insert("peak_thickness_nm".into(), json!(sweep.peak_thickness_nm));
    map.insert("peak_rate_rel".into(), json!(sweep.peak_rate));
    map.insert("absorbing".into(), json!(model.is_absorbing()));
    map.insert("points".into(), json!(sweep.thicknesses_nm.len()));
    map.insert("csv_path".into(), json!(args.output.display().to_string()));
    map.insert("sidecar_path".into(), json!(sidecar_path.display().to_string()));
    Ok(Value::Object(map))
}

pub(super) fn simulate(args: SimulateArgs) -> Result<Value, Failure> {
    if args.jitter < 0 {
        return Err(Failure::usage("invalid_model", "jitter must be >= 0").param("--jitter"));
    }
    let model = SourceModel {
        pair_rate_hz: args.pair_rate,
        eta1: args.eta1,
        eta2: args.eta2,
        dark1_hz: args.dark1,
        dark2_hz: args.dark2,
        jitter_sigma_ps: args.jitter as f64,
        dead_time_ps: args.dead_time,
        duration_ps: args.duration,
        seed: args.seed,
    };
    let (s1, s2, truth) = run_simulation(&model).map_err(|e| e.fail())?;
    write_pts(&args.output, &[&s1, &s2]).map_err(|e| e.fail().param("--output"))?;

    let record = SimulationRecord {
        model,
        ground_truth: truth,
        rng_algorithm: RNG_ALGORITHM.to_string(),
    };
    let sidecar_path = args.output.with_extension("ground_truth.json");
    let sidecar_text =
        serde_json::to_string_pretty(&record).expect("simulation record serializes");
    write_file(&sidecar_path, format!("{sidecar_text}\n").as_bytes())?;

    let mut map = envelope("simulate", &[])?;
    map.insert("output_path".into(), json!(args.output.display().to_string()));
    map.insert(
        "ground_truth_path".into(),
        json!(sidecar_path.display().to_string()),
    );
    map.insert("rng_algorithm".into(), json!(RNG_ALGORITHM));
    map.insert("seed".into(), json!(model.seed));
    map.insert("events_ch1".into(), json!(s1.len()));
    map.insert("events_ch2".into(), json!(s2.len()));
    map.insert(
        "ground_truth".into(),
        serde_json::to_value(truth).expect("ground truth serializes"),
    );
    Ok(Value::Object(map))
}

pub(super) fn correlate(args: CorrelateArgs) -> Result<Value, Failure> {
    let (s1, s2) = channel_pair(&args.input, args.ch1, args.ch2)?;
    let coincidences = match args.chunk {
        Some(span) => chunked_coincidence_count(&s1, &s2, args.window, args.offset, span)
            .map_err(|e| e.fail().param("--chunk"))?,
        None => coincidence_count(&s1, &s2, args.window, args.offset)
            .map_err(|e| e.fail().param("--window"))?,
    };
    let estimate = accidental_estimate(&s1, &s2, args.window, args.accidental_offset)
        .map_err(|e| e.fail().param("--accidental-offset"))?;
    let accidentals = match args.accidental_method {
        AccidentalMethod::Shifted => estimate.shifted_count as f64,
        AccidentalMethod::Analytic => estimate.analytic,
    };
    let car = crate::metrics::car(coincidences as f64, accidentals).map_err(|e| e.fail())?;

    let mut map = envelope("correlate", &[args.input.as_path()])?;
    map.insert("coincidences".into(), json!(coincidences));
    map.insert("accidentals".into(), json!(accidentals));
    map.insert(
        "accidentals_shifted".into(),
        json!(estimate.shifted_count),
    );
    map.insert("accidentals_analytic".into(), json!(estimate.analytic));
    map.insert(
        "accidental_method".into(),
        serde_json::to_value(args.accidental_method).expect("method serializes"),
    );
    car_fields(&mut map, &car);
    map.insert("window_ps".into(), json!(args.window));
    map.insert("offset_ps".into(), json!(args.offset));
    map.insert("accidental_offset_ps".into(), json!(estimate.offset_ps));
    map.insert("duration_ps".into(), json!(s1.duration_ps()));
    map.insert("events_ch1".into(), json!(s1.len()));
    map.insert("events_ch2".into(), json!(s2.len()));
    Ok(Value::Object(map))
}

pub(super) fn g2(args: G2Args) -> Result<Value, Failure> {
    let (s1, s2) = channel_pair(&args.input, args.ch1, args.ch2)?;
    let hist = g2_histogram(&s1, &s2, args.bin, args.tau_max)
        .map_err(|e| e.fail().param("--bin/--tau-max"))?;

    let normalized = hist.normalized();
    let mut out = Vec::new();
    writeln!(out, "tau_ps,counts,g2_norm").expect("write to Vec");
    for (i, &c) in hist.counts.iter().enumerate() {
        let g = normalized
            .as_ref()
            .map_or("nan".to_string(), |n| n[i].to_string());
        writeln!(out, "{},{},{}", hist.bin_center_ps(i), c, g).expect("write to Vec");
    }
    write_file(&args.output, &out)?;

    let zero = hist.zero_bin();
    let peak_bin = hist
        .counts
        .iter()
        .enumerate()
        .max_by_key(|&(_, &c)| c)
        .map(|(i, _)| i)
        .unwrap_or(zero);
    let mut map = envelope("g2", &[args.input.as_path()])?;
    map.insert("bin_width_ps".into(), json!(hist.bin_width_ps));
    map.insert("tau_min_ps".into(), json!(hist.tau_min_ps));
    map.insert("tau_max_ps".into(), json!(hist.tau_max_ps));
    map.insert("bins".into(), json!(hist.num_bins()));
    map.insert("total_counts".into(), json!(hist.total_counts()));
    map.insert("normalization".into(), json!(hist.normalization));
    map.insert("zero_bin_counts".into(), json!(hist.counts[zero]));
    map.insert(
        "g2_at_zero".into(),
        json!(normalized.as_ref().map(|n| n[zero])),
    );
    map.insert("peak_tau_ps".into(), json!(hist.bin_center_ps(peak_bin)));
    map.insert("peak_counts".into(), json!(hist.counts[peak_bin]));
    map.insert("csv_path".into(), json!(args.output.display().to_string()));
    Ok(Value::Object(map))
}

pub(super) fn metrics(args: MetricsArgs) -> Result<Value, Failure> {
    match (&args.input, args.rcc, args.r1, args.r2) {
        (Some(path), None, None, None) => metrics_from_streams(&args, path.clone()),
        (None, Some(rcc), Some(r1), Some(r2)) => metrics_from_rates(&args, rcc, r1, r2),
        _ => Err(Failure::usage(
            "usage",
            "pass either --input, or all of --rcc/--r1/--r2",
        )),
    }
}

fn metrics_from_streams(args: &MetricsArgs, path: PathBuf) -> Result<Value, Failure> {
    let (s1, s2) = channel_pair(&path, args.ch1, args.ch2)?;
    let result = analyze_coincidences(
        &s1,
        &s2,
        args.window,
        args.accidental_offset,
        args.accidental_method,
    )
    .map_err(|e| e.fail().param("--window/--accidental-offset"))?;
    let mut pair = PairMetrics::from_counts(
        s1.len() as u64,
        s2.len() as u64,
        result.coincidences,
        result.accidentals,
        result.window_ps,
        result.duration_ps,
    )
    .map_err(|e| e.fail())?;
    if args.dark1.is_some() || args.dark2.is_some() {
        pair = pair
            .dark_subtracted(args.dark1.unwrap_or(0.0), args.dark2.unwrap_or(0.0))
            .map_err(|e| e.fail().param("--dark1/--dark2"))?;
    }

    let mut map = envelope("metrics", &[path.as_path()])?;
    map.insert("singles_1_hz".into(), json!(pair.singles_1_hz));
    map.insert("singles_1_error_hz".into(), json!(pair.singles_1_error_hz));
    map.insert("singles_2_hz".into(), json!(pair.singles_2_hz));
    map.insert("singles_2_error_hz".into(), json!(pair.singles_2_error_hz));
    map.insert("singles_geomean_hz".into(), json!(pair.singles_geomean_hz));
    map.insert(
        "singles_geomean_error_hz".into(),
        json!(pair.singles_geomean_error_hz),
    );
    map.insert("coincidence_rate_hz".into(), json!(pair.coincidence_rate_hz));
    map.insert(
        "coincidence_rate_error_hz".into(),
        json!(pair.coincidence_rate_error_hz),
    );
    map.insert("accidental_rate_hz".into(), json!(pair.accidental_rate_hz));
    map.insert(
        "accidental_rate_error_hz".into(),
        json!(pair.accidental_rate_error_hz),
    );
    car_fields(&mut map, &pair.car);
    map.insert("pair_efficiency".into(), json!(pair.pair_efficiency));
    map.insert(
        "pair_efficiency_error".into(),
        json!(pair.pair_efficiency_error),
    );
    map.insert("window_ps".into(), json!(pair.window_ps));
    map.insert("duration_ps".into(), json!(pair.duration_ps));
    map.insert(
        "accidental_method".into(),
        serde_json::to_value(args.accidental_method).expect("method serializes"),
    );
    Ok(Value::Object(map))
}

fn metrics_from_rates(args: &MetricsArgs, rcc: f64, r1: f64, r2: f64) -> Result<Value, Failure> {
    let (r1, r2) = match (args.dark1, args.dark2) {
        (None, None) => (r1, r2),
        (d1, d2) => {
            let s1 = crate::metrics::subtract_darks(r1, d1.unwrap_or(0.0));
            let s2 = crate::metrics::subtract_darks(r2, d2.unwrap_or(0.0));
            (s1.rate_hz, s2.rate_hz)
        }
    };
    let eta = pair_efficiency(rcc, r1, r2).map_err(|e| e.fail().param("--r1/--r2"))?;
    let mut map = envelope("metrics", &[])?;
    map.insert("singles_1_hz".into(), json!(r1));
    map.insert("singles_2_hz".into(), json!(r2));
    map.insert("singles_geomean_hz".into(), json!((r1 * r2).sqrt()));
    map.insert("coincidence_rate_hz".into(), json!(rcc));
    map.insert("accidental_rate_hz".into(), json!(args.racc));
    if let Some(racc) = args.racc {
        let car = crate::metrics::car(rcc, racc).map_err(|e| e.fail().param("--racc"))?;
        car_fields(&mut map, &car);
    } else {
        map.insert("car".into(), Value::Null);
        map.insert("car_error".into(), Value::Null);
    }
    map.insert("pair_efficiency".into(), json!(eta));
    map.insert("pair_efficiency_error".into(), Value::Null);
    map.insert("window_ps".into(), Value::Null);
    map.insert("duration_ps".into(), Value::Null);
    Ok(Value::Object(map))
}

type XyPoints = (Vec<(f64, f64)>, Option<Vec<f64>>);

/// Reads a 2- or 3-column CSV: x, y, and an optional y error.
fn read_xy_csv(
    path: &Path,
    want_x: &str,
    want_y: &str,
    want_err: &str,
) -> Result<XyPoints, Failure> {
    let data_err = |row: usize, reason: String| {
        FormatError::MalformedRow { row, reason }
            .fail()
            .param("--input")
    };
    let file = std::fs::File::open(path).map_err(|e| e.fail().param("--input"))?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(file);
    let has_err = {
        let headers = rdr
            .headers()
            .map_err(|e| data_err(0, e.to_string()))?
            .iter()
            .collect::<Vec<_>>();
        match headers.as_slice() {
            [x, y] if *x == want_x && *y == want_y => false,
            [x, y, e] if *x == want_x && *y == want_y && *e == want_err => true,
            other => {
                return Err(data_err(
                    0,
                    format!(
                        "expected header `{want_x},{want_y}[,{want_err}]`, got `{}`",
                        other.join(",")
                    ),
                ))
            }
        }
    };
    let mut points = Vec::new();
    let mut errors = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| data_err(row, e.to_string()))?;
        let parse = |i: usize| -> Result<f64, Failure> {
            record
                .get(i)
                .ok_or_else(|| data_err(row, "missing field".into()))?
                .parse()
                .map_err(|_| data_err(row, format!("field {} is not a number", i + 1)))
        };
        points.push((parse(0)?, parse(1)?));
        if has_err {
            errors.push(parse(2)?);
        }
    }
    Ok((points, has_err.then_some(errors)))
}

pub(super) fn fit_power(args: FitPowerArgs) -> Result<Value, Failure> {
    let (points, sigmas) = read_xy_csv(&args.input, "power_mw", "rate_hz", "rate_err_hz")?;
    let fit = fit_linear(&points, sigmas.as_deref()).map_err(|e| e.fail().param("--input"))?;
    let mut map = envelope("fit-power", &[args.input.as_path()])?;
    map.insert("slope_hz_per_mw".into(), json!(fit.slope));
    map.insert("slope_error_hz_per_mw".into(), json!(fit.slope_error));
    map.insert("intercept_hz".into(), json!(fit.intercept));
    map.insert("intercept_error_hz".into(), json!(fit.intercept_error));
    map.insert("r_squared".into(), json!(fit.r_squared));
    map.insert("points".into(), json!(points.len()));
    map.insert("weighted".into(), json!(sigmas.is_some()));
    Ok(Value::Object(map))
}

pub(super) fn fit_polarization(args: FitPolarizationArgs) -> Result<Value, Failure> {
    let (points, sigmas) = read_xy_csv(&args.input, "theta_deg", "rate_hz", "rate_err_hz")?;
    let fit = fit_pol(&points, sigmas.as_deref()).map_err(|e| e.fail().param("--input"))?;
    let mut map = envelope("fit-polarization", &[args.input.as_path()])?;
    map.insert("amplitude".into(), json!(fit.amplitude));
    map.insert("amplitude_error".into(), json!(fit.amplitude_error));
    map.insert("offset".into(), json!(fit.offset));
    map.insert("offset_error".into(), json!(fit.offset_error));
    map.insert("theta0_deg".into(), json!(fit.theta0_deg));
    map.insert(
        "theta0_error_deg".into(),
        if fit.theta0_error_deg.is_finite() {
            json!(fit.theta0_error_deg)
        } else {
            Value::Null
        },
    );
    map.insert("residual_norm".into(), json!(fit.residual_norm));
    map.insert("degenerate".into(), json!(fit.degenerate));
    map.insert("points".into(), json!(points.len()));
    map.insert("weighted".into(), json!(sigmas.is_some()));
    Ok(Value::Object(map))
}

pub(super) fn optimal_waist(args: OptimalWaistArgs) -> Result<Value, Failure> {
    let pump = optimal_pump_waist(args.collection_waist)
        .map_err(|e| e.fail().param("--collection-waist"))?;
    let mut map = envelope("optimal-waist", &[])?;
    map.insert("collection_waist_um".into(), json!(args.collection_waist));
    map.insert("pump_waist_um".into(), json!(pump));
    Ok(Value::Object(map))
}
