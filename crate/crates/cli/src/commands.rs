use std::fs;
use std::path::Path;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use sumset_core::brute::{brute_config_prob, brute_distribution};
use sumset_core::condgraph::{
    consecutive_bounds, estimate_lambda, lambda_upper_bound, pair_prob_closed_form,
    pair_prob_exact, parse_config_list, MAX_UPPER_BOUND_OFFSET,
};
use sumset_core::models::{divot_scan as scan, fit_lambda, model_curve, DivotRule, Family};
use sumset_core::moments::variance_series;
use sumset_core::rigbounds::{
    combine, derive_convolution, derive_y, interval_to_csv, merge_dir, parse_interval_csv,
    run_shards, DistKind, IntervalVector,
};
use sumset_core::simulate::{
    confidence, fringe_stats, parse_estimates_csv, sample_m, sample_y, sample_z, tally_to_csv,
    TallyKind,
};
use sumset_core::{Error, Result};

use crate::manifest::Recorder;
use crate::*;

fn ratio_decimal(r: &BigRational) -> String {
    format!("{:.12}", r.to_f64().unwrap_or(f64::NAN))
}

pub fn pair_prob(a: PairProbArgs) -> Result<()> {
    let mut rec = Recorder::new("pair-prob");
    rec.param("i", a.i)
        .param("j", a.j)
        .param("closed_form", a.closed_form);
    let exact = pair_prob_exact(a.i, a.j)?;
    println!("P({}, {} not in A+A) = {exact}", a.i, a.j);
    let mut csv = String::from("i,j,exact,exact_decimal,closed_form,closed_form_valid\n");
    if a.closed_form {
        let cf = pair_prob_closed_form(a.i, a.j)?;
        let value = cf
            .value
            .as_ref()
            .map_or("undefined".to_string(), |v| v.to_string());
        let flag = if cf.valid { "VALID" } else { "INVALID" };
        println!(
            "closed form (q = {}, r = {}, r' = {}) = {value} [{flag}]",
            cf.params.q, cf.params.r, cf.params.r_prime
        );
        csv.push_str(&format!(
            "{},{},{exact},{:.12},{value},{}\n",
            a.i,
            a.j,
            exact.to_f64(),
            cf.valid
        ));
    } else {
        csv.push_str(&format!(
            "{},{},{exact},{:.12},,\n",
            a.i,
            a.j,
            exact.to_f64()
        ));
    }
    rec.write(&a.out, &csv)?;
    rec.finish(&a.out)?;
    Ok(())
}

pub fn variance(a: VarianceArgs) -> Result<()> {
    let mut rec = Recorder::new("variance");
    rec.param("terms", a.terms);
    let r = variance_series(a.terms)?;
    println!("partial sum      {:.12}", r.partial_sum_f64);
    println!("tail 87(phi/2)^N {:.3e}", r.tail_bound);
    println!("rigorous tail    {:.3e}", r.rigorous_tail);
    println!(
        "interval         [{:.12}, {:.12}]",
        r.value_interval.0, r.value_interval.1
    );
    let csv = format!(
        "quantity,value\nterms,{}\npartial_sum_exact,{}\npartial_sum,{:.15}\ntail_bound,{:e}\nrigorous_tail,{:e}\ninterval_lower,{:.15}\ninterval_upper,{:.15}\ngolden_tail_consistent,{}\n",
        r.terms,
        r.partial_sum,
        r.partial_sum_f64,
        r.tail_bound,
        r.rigorous_tail,
        r.value_interval.0,
        r.value_interval.1,
        r.golden_tail_consistent
    );
    rec.write(&a.out, &csv)?;
    rec.finish(&a.out)?;
    Ok(())
}

pub fn bounds(a: BoundsArgs) -> Result<()> {
    let n1 = a.n1.unwrap_or_else(|| a.n.saturating_sub(8).max(1));
    let mut rec = Recorder::new("bounds");
    rec.param("n", a.n)
        .param("n1", n1)
        .param("shards", &a.shards);
    let shards = (!a.shards.is_empty()).then_some(&a.shards[..]);
    let summary = run_shards(a.n, n1, shards, &a.out)?;
    println!(
        "n = {}, n1 = {n1}: computed {} shard(s), reused {}",
        a.n,
        summary.computed.len(),
        summary.reused.len()
    );
    for f in summary.files {
        rec.output(f);
    }
    rec.finish(&a.out)?;
    Ok(())
}

fn print_intervals(v: &IntervalVector) {
    println!("k  {}_lower  {}_upper", v.kind, v.kind);
    for k in 0..v.lower.len() {
        let (lo, hi) = v.outward_decimals(k, 5);
        println!("{k:<2} {lo:.5}  {hi:.5}");
    }
}

pub fn bounds_combine(a: CombineArgs) -> Result<()> {
    let mut rec = Recorder::new("bounds-combine");
    rec.param("in", a.input.display().to_string());
    let (acc, files) = merge_dir(&a.input)?;
    for f in files {
        rec.input(f);
    }
    let z = combine(&acc)?;
    print_intervals(&z);
    rec.write(&a.out, &interval_to_csv(&z))?;
    rec.finish(&a.out)?;
    Ok(())
}

pub fn derive(a: DeriveArgs) -> Result<()> {
    let kind: DistKind = a.kind.parse()?;
    let mut rec = Recorder::new("derive");
    rec.param("kind", kind.as_str())
        .param("in", a.input.display().to_string());
    let text = fs::read_to_string(&a.input)?;
    rec.input(&a.input);
    let input = parse_interval_csv(&text)?;
    let out = match (kind, input.kind) {
        (DistKind::Y, DistKind::Z) => derive_y(&input)?,
        (DistKind::M, DistKind::Z) => derive_convolution(&derive_y(&input)?, DistKind::M)?,
        (DistKind::M, DistKind::Y) => derive_convolution(&input, DistKind::M)?,
        (DistKind::W, DistKind::Z) => derive_convolution(&input, DistKind::W)?,
        (want, have) => {
            return Err(Error::InvalidArgument(format!(
                "cannot derive {want} from {have} bounds"
            )))
        }
    };
    print_intervals(&out);
    let path = a
        .out
        .unwrap_or_else(|| format!("{}.csv", kind.as_str()).into());
    rec.write(&path, &interval_to_csv(&out))?;
    rec.finish(&path)?;
    Ok(())
}

pub fn montecarlo(a: MonteCarloArgs) -> Result<()> {
    let kind = TallyKind::parse(&a.kind)?;
    let mut rec = Recorder::new("montecarlo");
    rec.param("kind", kind.as_str())
        .param("samples", a.samples)
        .param("window", a.window)
        .param("seed", a.seed)
        .param("level", a.level);
    let t = match kind {
        TallyKind::Z => sample_z(a.samples, a.window, a.seed)?,
        TallyKind::Y => sample_y(a.samples, a.window, a.seed)?,
        TallyKind::M => sample_m(a.window, a.samples, a.seed)?,
    };
    let ci = confidence(&t, a.level)?;
    println!("k  estimate   ci_lower   ci_upper");
    for r in ci.rows.iter().take(16) {
        println!(
            "{:<2} {:.6}  {:.6}  {:.6}",
            r.k, r.estimate, r.lower, r.upper
        );
    }
    if kind == TallyKind::M {
        for (hi, lo) in [(6, 7), (8, 7)] {
            let d = t.estimate(hi) - t.estimate(lo);
            println!(
                "m({hi}) - m({lo}) = {d:.6} = {:.2} standard errors",
                d / t.difference_se(hi, lo)
            );
        }
    }
    rec.write(&a.out, &tally_to_csv(&t, &ci))?;
    rec.finish(&a.out)?;
    Ok(())
}

pub fn fringe(a: FringeArgs) -> Result<()> {
    let mut rec = Recorder::new("fringe");
    rec.param("n", a.n)
        .param("samples", a.samples)
        .param("seed", a.seed);
    let f = fringe_stats(a.n, a.samples, a.seed)?;
    let mut csv = format!(
        "# n {}\n# samples {}\n# seed {}\nk,count,mean_first_present,mean_run_start\n",
        f.n, f.samples, f.seed
    );
    for (k, row) in f.rows.iter().enumerate() {
        if let Some(r) = row {
            csv.push_str(&format!(
                "{k},{},{:.6},{:.6}\n",
                r.count, r.mean_first_present, r.mean_run_start
            ));
        }
    }
    print!("{csv}");
    rec.write(&a.out, &csv)?;
    rec.finish(&a.out)?;
    Ok(())
}

fn write_json(rec: &mut Recorder, path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    print!("{text}");
    rec.write(path, &text)
}

pub fn divot_scan(a: DivotScanArgs) -> Result<()> {
    let family = Family::parse(&a.family)?;
    let rule = DivotRule::parse(&a.rule)?;
    let mut rec = Recorder::new("models divot-scan");
    rec.param("family", family)
        .param("at", a.at)
        .param("rule", rule)
        .param("step", a.step);
    let s = scan(family, a.at, rule, a.step)?;
    write_json(&mut rec, &a.out, &s)?;
    rec.finish(&a.out)?;
    Ok(())
}

pub fn curve(a: CurveArgs) -> Result<()> {
    let family = Family::parse(&a.family)?;
    let mut rec = Recorder::new("models curve");
    rec.param("family", family)
        .param("lambda", a.lambda)
        .param("kmax", a.kmax);
    let c = model_curve(family, a.lambda, a.kmax)?;
    let family_name = format!("{family:?}").to_lowercase();
    let mut csv = format!("# family {family_name}\n# lambda {}\nk,z,y,m\n", a.lambda);
    for k in 0..=a.kmax {
        csv.push_str(&format!("{k},{:.9},{:.9},{:.9}\n", c.z[k], c.y[k], c.m[k]));
    }
    rec.write(&a.out, &csv)?;
    rec.finish(&a.out)?;
    Ok(())
}

pub fn fit(a: FitArgs) -> Result<()> {
    let mut rec = Recorder::new("models fit");
    rec.param("in", a.input.display().to_string())
        .param("weighted", a.weighted)
        .param("kmax", a.kmax);
    let table = parse_estimates_csv(&fs::read_to_string(&a.input)?)?;
    rec.input(&a.input);
    let take = (a.kmax + 1).min(table.rows.len());
    let z: Vec<f64> = table.estimates()[..take].to_vec();
    let weights: Option<Vec<f64>> = a.weighted.then(|| {
        table.half_widths()[..take]
            .iter()
            .map(|h| if *h > 0.0 { 1.0 / (h * h) } else { 0.0 })
            .collect()
    });
    let f = fit_lambda(&z, weights.as_deref())?;
    write_json(&mut rec, &a.out, &f)?;
    rec.finish(&a.out)?;
    Ok(())
}

pub fn brute(a: BruteArgs) -> Result<()> {
    let mut rec = Recorder::new("brute");
    rec.param("n", a.n);
    let d = brute_distribution(a.n)?;
    let mut csv = String::from("k,count,probability,decimal\n");
    let mut total = sumset_core::DyadicProb::zero();
    for (k, &c) in d.counts().iter().enumerate() {
        let p = d.mass(k);
        csv.push_str(&format!("{k},{c},{p},{:.12}\n", p.to_f64()));
        total = &total + &p;
    }
    println!(
        "n = {}: {} values of M, total probability {total}",
        a.n,
        d.counts().len()
    );
    println!("E[M] = {}", ratio_decimal(&d.moment(1)));
    rec.write(&a.out, &csv)?;
    rec.finish(&a.out)?;
    Ok(())
}

pub fn lambda(a: LambdaArgs) -> Result<()> {
    let config = parse_config_list(&a.config)?;
    let mut rec = Recorder::new("lambda");
    rec.param("config", &config)
        .param("kmin", a.kmin)
        .param("kmax", a.kmax);
    let est = estimate_lambda(&config, a.kmin, a.kmax)?;
    let mut csv = String::from("k,probability,decimal,ratio_to_previous\n");
    for (idx, (k, p)) in est.samples.iter().enumerate() {
        let ratio = if idx == 0 {
            String::new()
        } else {
            format!("{:.9}", est.ratios[idx - 1])
        };
        csv.push_str(&format!("{k},{p},{:.12e},{ratio}\n", p.to_f64()));
    }
    println!(
        "lambda in [{:.6}, {:.6}] (Fekete constant {:.6})",
        est.lambda_low, est.lambda_high, est.fekete_constant
    );
    if let Some(p) = est.point {
        println!("two-step ratio estimate {p:.6}");
    }
    if config.last().is_some_and(|&m| m <= MAX_UPPER_BOUND_OFFSET) {
        let u = lambda_upper_bound(&config)?;
        println!("two-set upper bound {:.6} (P = {})", u.bound, u.probability);
    }
    rec.write(&a.out, &csv)?;
    rec.finish(&a.out)?;
    Ok(())
}

pub fn consecutive(a: ConsecutiveArgs) -> Result<()> {
    let mut rec = Recorder::new("consecutive");
    rec.param("k", a.k).param("m", a.m);
    let (lower, upper) = consecutive_bounds(a.k, a.m)?;
    let targets: Vec<u32> = (a.k + 1..=a.k + a.m).collect();
    let exact = if a.k + a.m < 26 {
        Some(brute_config_prob(&targets)?)
    } else {
        None
    };
    println!("lower {lower} = {:.6e}", lower.to_f64());
    println!("upper {upper:.6e}");
    let exact_text = exact.as_ref().map_or(String::new(), |p| p.to_string());
    if let Some(p) = &exact {
        println!("exact {p} = {:.6e}", p.to_f64());
    }
    let csv = format!(
        "k,m,lower,upper,exact\n{},{},{lower},{upper:.12e},{exact_text}\n",
        a.k, a.m
    );
    rec.write(&a.out, &csv)?;
    rec.finish(&a.out)?;
    Ok(())
}
