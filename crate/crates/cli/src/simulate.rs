use crate::io::{read_text, write_all};
use crate::{Builtin, CliError, Filters, SimulateArgs};
use geotrack::sim::{
    interval_sweep, metrics_row, nmea_stream, parse_scenario, run_csv, run_filters,
    FilterChoice, FilterSetup, RunMetrics, Scenario, SimError, BOSTON_DEPARTURE, LAWNMOWER, SWEEP_CSV_HEADER,
};

fn sim_error(e: SimError) -> CliError {
    match e {
        SimError::Scenario(e) => CliError::Input(format!("scenario: {e}")),
        SimError::Filter(e) => CliError::Numerical(format!("filter failure: {e}")),
    }
}

fn scenario(a: &SimulateArgs) -> Result<Scenario, CliError> {
    let mut s = match &a.scenario {
        Some(p) => parse_scenario(&read_text(p)?).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        None => {
            let text = match a.builtin {
                Builtin::Boston => BOSTON_DEPARTURE,
                Builtin::Lawnmower => LAWNMOWER,
            };
            parse_scenario(text).expect("shipped scenario parses")
        }
    };
    if let Some(seed) = a.seed {
        s.rng_seed = seed;
    }
    if let Some(dt) = a.ais_interval {
        s.ais_interval = dt;
    }
    s.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(s)
}

/// Parses `FROM:TO[:STEP]` into the inclusive list of intervals.
pub fn parse_sweep(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("--sweep expects FROM:TO[:STEP], got `{spec}`"));
    let parts: Vec<f64> = spec.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let (from, to, step) = match parts.as_slice() {
        [a, b] => (*a, *b, 1.0),
        [a, b, c] => (*a, *b, *c),
        _ => return Err(bad()),
    };
    if !(from > 0.0 && to >= from && step > 0.0) || !to.is_finite() || (to - from) / step > 1e5 {
        return Err(bad());
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| from + i as f64 * step).collect())
}

fn check(label: &str, m: &RunMetrics) -> Result<(), CliError> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("{label}: non-finite metrics")))
    }
}

pub fn run(a: &SimulateArgs) -> Result<(), CliError> {
    let s = scenario(a)?;
    let mut setup = FilterSetup::default();
    setup.ukf.earth = a.earth.into();
    let choice = match a.filters {
        Filters::Ukf => FilterChoice::Ukf,
        Filters::Ekf => FilterChoice::Ekf,
        Filters::Both => FilterChoice::Both,
    };

    if let Some(p) = &a.nmea {
        let lines = nmea_stream(&s, a.mmsi).map_err(sim_error)?;
        write_all(Some(p), &(lines.join("\n") + "\n"))?;
    }

    if let Some(spec) = &a.sweep {
        let intervals = parse_sweep(spec)?;
        if !matches!(a.filters, Filters::Both) {
            return Err(CliError::Usage("--sweep runs both filters; omit --filters".into()));
        }
        let points = interval_sweep(&s, &intervals).map_err(sim_error)?;
        let mut csv = format!("{SWEEP_CSV_HEADER}\n");
        for p in &points {
            let label = format!("{}", p.ais_interval);
            for (name, m) in [("ukf", &p.ukf), ("ekf", &p.ekf)] {
                check(&label, m)?;
                csv.push_str(&metrics_row(&label, name, m));
                csv.push('\n');
            }
        }
        write_all(a.output.as_ref(), &csv)?;
        eprintln!("simulate: {} sweep, {} intervals", s.name, points.len());
        return Ok(());
    }

    let out = run_filters(&s, choice, &setup).map_err(sim_error)?;
    write_all(a.output.as_ref(), &run_csv(&out.rows))?;
    let mut summary = format!("scenario{}\n", &SWEEP_CSV_HEADER["ais_interval".len()..]);
    for (name, m) in [("ukf", out.ukf), ("ekf", out.ekf)] {
        if let Some(m) = m {
            check(name, &m)?;
            summary.push_str(&metrics_row(&s.name, name, &m));
            summary.push('\n');
        }
    }
    if let Some(p) = &a.metrics {
        write_all(Some(p), &summary)?;
    }
    eprint!("{summary}");
    Ok(())
}
