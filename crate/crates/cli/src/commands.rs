//! One handler per subcommand. Handlers compute everything first, then
//! render in the requested format.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sphere_strings::coalgebra::{
    apply_map, dual_product, dual_product_json, verify_gh_structure, CohomologyGenerator, CoproductMap,
    EvenSphereCoproducts,
};
use sphere_strings::extension::{check_adapted, check_associativity};
use sphere_strings::geodesic::{
    average_index, endpoint_kernel, jacobi_index, random_tangent, resonance_check, shoot_antipodal, spectrum_scan,
    density_sum, DensityEntry, MetricSpec, ShootingResult,
};
use sphere_strings::homology::{
    critical_spectrum, diagram_boxes, emit_stacked_diagram, homology_json, homology_rows, render_group,
};
use sphere_strings::sphere::{degree_law_report, extended_product, sign_commutator_report, verify_presentation};
use sphere_strings::{CheckReport, Degree, CoefficientRing, Regime, SphereAlgebraTable, Space};

use crate::config::{resolve_metric, Format, RunConfig};
use crate::error::CliError;
use crate::render::{csv_out, json_out, list, num, text_fields, text_table, Output};
use crate::{AlgebraCmd, CoalgebraCmd, Command, DensityArgs, GeodesicArgs, GeodesicsCmd, HomologyCmd, ResonanceArgs};

/// Shown whenever the copairing is evaluated: its sums are indexed so that
/// both tensor factors have the degree the map requires.
pub const COPAIRING_NOTE: &str =
    "copairing sums are re-indexed so that each term has degree |X| + 1 − n; the literal summation bounds do not respect the grading";

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Output, CliError> {
    match cmd {
        Command::Algebra(AlgebraCmd::Mul { n, coeff, x, y }) => algebra_mul(cfg, *n, coeff.as_deref(), x, y),
        Command::Algebra(AlgebraCmd::Verify { n, cutoff }) => algebra_verify(cfg, *n, cutoff.unwrap_or(cfg.cutoff)),
        Command::Coalgebra(CoalgebraCmd::Apply { n, map, x }) => coalgebra_apply(cfg, *n, map, x),
        Command::Coalgebra(CoalgebraCmd::Dual { n, phi, psi }) => coalgebra_dual(cfg, *n, phi, psi),
        Command::Coalgebra(CoalgebraCmd::Verify { n, cutoff }) => coalgebra_verify(cfg, *n, cutoff.unwrap_or(cfg.cutoff)),
        Command::Homology(HomologyCmd::Table { space, n, coeff, max_degree }) => {
            homology_table(cfg, parse_space(space)?, *n, coeff, *max_degree)
        }
        Command::Homology(HomologyCmd::Spectrum { space, n, max_length }) => {
            homology_spectrum(cfg, parse_space(space)?, *n, *max_length)
        }
        Command::Homology(HomologyCmd::Diagram { space, n, levels }) => homology_diagram(cfg, parse_space(space)?, *n, *levels),
        Command::Geodesics(GeodesicsCmd::Shoot(g)) => geodesics_shoot(cfg, g),
        Command::Geodesics(GeodesicsCmd::Index { geo, iterates }) => geodesics_index(cfg, geo, *iterates),
        Command::Geodesics(GeodesicsCmd::Scan { metric, n, samples, speed_min, speed_max }) => {
            geodesics_scan(cfg, metric.as_deref(), *n, *samples, *speed_min, *speed_max)
        }
        Command::Resonance(a) => resonance(cfg, a),
        Command::Density(a) => density(cfg, a),
        Command::Config => show_config(cfg),
    }
}

fn parse_space(s: &str) -> Result<Space, CliError> {
    match s {
        "P" | "p" | "path" => Ok(Space::AntipodalPathSpace),
        "L" | "l" | "loop" => Ok(Space::LoopSpace),
        other => Err(CliError::Usage(format!("unknown space {:?}: expected P or L", other))),
    }
}

fn parse_ring(s: &str) -> Result<CoefficientRing, CliError> {
    Ok(s.parse::<CoefficientRing>()?)
}

fn table(n: u32, coeff: Option<&str>) -> Result<SphereAlgebraTable, CliError> {
    Ok(match coeff {
        Some(c) => SphereAlgebraTable::with_ring(n, parse_ring(c)?)?,
        None => SphereAlgebraTable::new(n)?,
    })
}

fn algebra_mul(cfg: &RunConfig, n: u32, coeff: Option<&str>, x: &str, y: &str) -> Result<Output, CliError> {
    let t = table(n, coeff)?;
    let ex = t.parse_element(x)?;
    let ey = t.parse_element(y)?;
    let p = extended_product(&t, &ex, &ey)?;
    let degree = match p.degree() {
        Degree::Homogeneous(d) => json!(d),
        Degree::Zero | Degree::Mixed => Value::Null,
    };
    let out = match cfg.format {
        Format::Text => format!("{}\n{}\n", p, serde_json::to_string(&p.to_json()).expect("serializable")),
        Format::Json => json_out(json!({
            "n": n,
            "ring": t.ring.to_string(),
            "left": ex.to_string(),
            "right": ey.to_string(),
            "product": p.to_string(),
            "degree": degree,
            "terms": p.to_json()["terms"],
        })),
        Format::Csv => {
            let rows: Vec<Vec<String>> = p
                .terms()
                .map(|(g, k)| vec![g.space.tag().to_string(), g.family.name().to_string(), g.index.to_string(), k.to_string()])
                .collect();
            csv_out(&["space", "family", "index", "coeff"], &rows)?
        }
    };
    Ok(Output::pass(out))
}

/// Named reports rendered as a summary table / JSON object / CSV.
fn render_reports(cfg: &RunConfig, header: Value, reports: &[(&str, CheckReport)]) -> Result<Output, CliError> {
    let passed = reports.iter().all(|(_, r)| r.passed());
    let out = match cfg.format {
        Format::Text => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|(name, r)| {
                    vec![name.to_string(), r.checked.to_string(), r.violations.len().to_string(), pass_word(r.passed()).into()]
                })
                .collect();
            let mut s = text_table(&["check", "checked", "violations", "status"], &rows);
            for (name, r) in reports {
                for v in r.violations.iter().take(5) {
                    s.push_str(&format!("{}: {} at ({}): {} ≠ {}\n", name, v.identity, v.witness.join(", "), v.lhs, v.rhs));
                }
                for note in &r.notes {
                    s.push_str(&format!("{}: note: {}\n", name, note));
                }
            }
            s.push_str(&format!("overall: {}\n", pass_word(passed)));
            s
        }
        Format::Json => {
            let mut obj = header;
            let checks: serde_json::Map<String, Value> = reports.iter().map(|(k, r)| (k.to_string(), r.to_json())).collect();
            obj["checks"] = Value::Object(checks);
            obj["passed"] = json!(passed);
            json_out(obj)
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|(name, r)| vec![name.to_string(), r.checked.to_string(), r.violations.len().to_string(), r.passed().to_string()])
                .collect();
            csv_out(&["check", "checked", "violations", "passed"], &rows)?
        }
    };
    Ok(Output::with_status(out, passed))
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn algebra_verify(cfg: &RunConfig, n: u32, cutoff: i64) -> Result<Output, CliError> {
    let t = SphereAlgebraTable::new(n)?;
    let mut reports = vec![
        ("presentation", verify_presentation(&t, cutoff)?),
        ("degree_law", degree_law_report(&t, cutoff)?),
        ("adaptedness", check_adapted(&t, &t, &t, cutoff)?),
        ("associativity", check_associativity(&t.extended(), cutoff)?),
    ];
    if t.regime == Regime::Even {
        reports.push(("sign_commutation", sign_commutator_report(&t, cutoff)?));
    }
    render_reports(cfg, json!({ "n": n, "regime": format!("{:?}", t.regime), "cutoff": cutoff }), &reports)
}

fn coalgebra_apply(cfg: &RunConfig, n: u32, map: &str, x: &str) -> Result<Output, CliError> {
    let map: CoproductMap = map.parse()?;
    let tables = EvenSphereCoproducts::new(n)?;
    let t = SphereAlgebraTable::new(n)?;
    let ex = t.parse_element(x)?;
    let img = apply_map(&tables, map, &ex)?;
    let uses_copairing = matches!(map, CoproductMap::Copairing | CoproductMap::Full);
    let out = match cfg.format {
        Format::Text => {
            let mut s = format!("{}\n", img);
            if uses_copairing {
                s.push_str(&format!("# {}\n", COPAIRING_NOTE));
            }
            s
        }
        Format::Json => {
            let mut obj = json!({ "n": n, "map": format!("{:?}", map), "input": ex.to_string(), "output": img.to_string() });
            obj["tensor"] = img.to_json();
            if uses_copairing {
                obj["provenance_note"] = json!(COPAIRING_NOTE);
            }
            json_out(obj)
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                img.terms().map(|((a, b), k)| vec![a.to_string(), b.to_string(), k.to_string()]).collect();
            csv_out(&["left", "right", "coeff"], &rows)?
        }
    };
    let mut o = Output::pass(out);
    if uses_copairing && cfg.format == Format::Csv {
        o = o.note(COPAIRING_NOTE);
    }
    Ok(o)
}

fn coalgebra_dual(cfg: &RunConfig, n: u32, phi: &str, psi: &str) -> Result<Output, CliError> {
    let a = CohomologyGenerator::parse(phi)?;
    let b = CohomologyGenerator::parse(psi)?;
    let p = dual_product(n, &a, &b)?;
    let j = dual_product_json(n, &a, &b, &p);
    let out = match cfg.format {
        Format::Text => format!("{} ∘ {} = {}\n", a, b, p),
        Format::Json => json_out(j),
        Format::Csv => csv_out(
            &["left", "right", "sign", "result", "degree"],
            &[vec![
                a.to_string(),
                b.to_string(),
                j["sign"].to_string(),
                j["result"].as_str().unwrap_or("").to_string(),
                j["degree"].as_i64().map(|d| d.to_string()).unwrap_or_default(),
            ]],
        )?,
    };
    Ok(Output::pass(out).note(COPAIRING_NOTE))
}

fn coalgebra_verify(cfg: &RunConfig, n: u32, cutoff: i64) -> Result<Output, CliError> {
    let rep = verify_gh_structure(n, cutoff)?;
    let o = render_reports(cfg, json!({ "n": n, "cutoff": cutoff }), &[("coproduct_structure", rep)])?;
    Ok(o.note(COPAIRING_NOTE))
}

fn homology_table(cfg: &RunConfig, space: Space, n: u32, coeff: &str, max_degree: i64) -> Result<Output, CliError> {
    let ring = parse_ring(coeff)?;
    let rows = homology_rows(space, n, ring, max_degree)?;
    let cells: Vec<Vec<String>> = rows.iter().map(|(i, g)| vec![i.to_string(), render_group(g, ring)]).collect();
    let out = match cfg.format {
        Format::Text => {
            format!("H_*({}, {}) for n = {}\n{}", space.tag(), ring, n, text_table(&["degree", "group"], &cells))
        }
        Format::Json => json_out(homology_json(space, n, ring, &rows)),
        Format::Csv => csv_out(&["degree", "group"], &cells)?,
    };
    Ok(Output::pass(out))
}

fn homology_spectrum(cfg: &RunConfig, space: Space, n: u32, max_length_pi: f64) -> Result<Output, CliError> {
    let s = critical_spectrum(space, n, max_length_pi * PI)?;
    let cells: Vec<Vec<String>> = s
        .strata
        .iter()
        .map(|st| {
            vec![
                format!("{}π", st.length_over_pi),
                num(st.length),
                num(st.energy),
                st.index.to_string(),
                st.nullity.to_string(),
                st.manifold.short().to_string(),
            ]
        })
        .collect();
    let header = ["length/π", "length", "energy", "index", "nullity", "manifold"];
    let out = match cfg.format {
        Format::Text => text_table(&header, &cells),
        Format::Json => json_out(s.to_json()),
        Format::Csv => csv_out(&header, &cells)?,
    };
    Ok(Output::pass(out))
}

fn homology_diagram(cfg: &RunConfig, space: Space, n: u32, levels: usize) -> Result<Output, CliError> {
    let text = emit_stacked_diagram(space, n, levels)?;
    let boxes = diagram_boxes(space, n, levels);
    let out = match cfg.format {
        Format::Text => text,
        Format::Json => json_out(json!({ "space": space.tag(), "n": n, "levels": levels, "boxes": boxes, "diagram": text })),
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                boxes.iter().map(|b| vec![b.energy_label.clone(), b.low.to_string(), b.high.to_string(), b.manifold.clone()]).collect();
            csv_out(&["energy", "low", "high", "manifold"], &rows)?
        }
    };
    Ok(Output::pass(out))
}

fn metric_for(cfg: &RunConfig, arg: Option<&str>, n: u32) -> Result<(String, MetricSpec), CliError> {
    let text = resolve_metric(arg.unwrap_or(&cfg.metric))?;
    let m = MetricSpec::parse(&text, n)?;
    Ok((text, m))
}

/// Starting point and initial velocity for level k: the point is projected
/// to the sphere, the direction to its tangent space and scaled to speed
/// (2k + 1)π.
fn initial_data(m: &MetricSpec, g: &GeodesicArgs) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let dim = m.ambient_dim();
    let unit = |i: usize| (0..dim).map(|j| if j == i { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
    let mut p = g.point.clone().unwrap_or_else(|| unit(0));
    let mut v = g.direction.clone().unwrap_or_else(|| unit(1));
    if p.len() != dim || v.len() != dim {
        return Err(CliError::Usage(format!("--point and --direction need {} coordinates", dim)));
    }
    if p.iter().all(|x| *x == 0.0) {
        return Err(CliError::Usage("--point must be nonzero".into()));
    }
    m.project_point(&mut p);
    m.project_velocity(&p, &mut v);
    let speed = m.norm_sq(&p, &v).sqrt();
    if !(speed > 1e-12) {
        return Err(CliError::Usage("--direction is normal to the sphere at --point".into()));
    }
    let target = (2 * g.level + 1) as f64 * PI;
    v.iter_mut().for_each(|x| *x *= target / speed);
    Ok((p, v))
}

fn shoot(cfg: &RunConfig, g: &GeodesicArgs) -> Result<(String, MetricSpec, ShootingResult), CliError> {
    let (text, m) = metric_for(cfg, g.metric.as_deref(), g.n)?;
    let (p, v) = initial_data(&m, g)?;
    let s = shoot_antipodal(&m, &p, &v, &cfg.shooting_options())?;
    Ok((text, m, s))
}

fn geodesics_shoot(cfg: &RunConfig, g: &GeodesicArgs) -> Result<Output, CliError> {
    let (metric, _, s) = shoot(cfg, g)?;
    let r = &s.record;
    let out = match cfg.format {
        Format::Text => text_fields(&[
            ("metric", metric),
            ("n", g.n.to_string()),
            ("level", g.level.to_string()),
            ("length", num(r.length)),
            ("length/π", num(r.length / PI)),
            ("energy", num(r.energy)),
            ("iterations", s.iterations.to_string()),
            ("antipodal residual", num(r.antipodal_residual)),
            ("p", list(&r.p)),
            ("v", list(&r.v)),
        ]),
        Format::Json => {
            let mut obj = json!({ "metric": metric, "n": g.n, "level": g.level, "iterations": s.iterations });
            obj["length_over_pi"] = json!(r.length / PI);
            obj["geodesic"] = r.to_json();
            json_out(obj)
        }
        Format::Csv => csv_out(
            &["length", "energy", "iterations", "antipodal_residual"],
            &[vec![num(r.length), num(r.energy), s.iterations.to_string(), num(r.antipodal_residual)]],
        )?,
    };
    Ok(Output::pass(out))
}

fn geodesics_index(cfg: &RunConfig, g: &GeodesicArgs, iterates: usize) -> Result<Output, CliError> {
    let (metric, m, s) = shoot(cfg, g)?;
    let o = cfg.index_options();
    let idx = jacobi_index(&m, &s.record, &o)?;
    let ker = endpoint_kernel(&m, &s.record, &o)?;
    let avg = if iterates > 0 { Some(average_index(&m, &s.record, iterates, &o)?) } else { None };
    let decided = idx.is_decided() && !ker.ambiguous && avg.as_ref().map_or(true, |a| a.ambiguous.is_empty());
    let r = &s.record;
    let out = match cfg.format {
        Format::Text => {
            let mut f = vec![
                ("metric", metric),
                ("n", g.n.to_string()),
                ("length", num(r.length)),
                ("energy", num(r.energy)),
                ("index", idx.index.to_string()),
                ("conjugate times", list(&idx.conjugate_points.iter().map(|c| c.t).collect::<Vec<_>>())),
                ("nullity", ker.dimension.to_string()),
                ("decided", decided.to_string()),
            ];
            if let Some(a) = &avg {
                f.push(("average index", num(a.alpha)));
            }
            text_fields(&f)
        }
        Format::Json => json_out(json!({
            "metric": metric,
            "n": g.n,
            "length": r.length,
            "energy": r.energy,
            "index": idx,
            "kernel": ker,
            "average_index": avg,
            "decided": decided,
        })),
        Format::Csv => csv_out(
            &["length", "energy", "index", "nullity_flag"],
            &[vec![num(r.length), num(r.energy), idx.index.to_string(), (ker.dimension > 0).to_string()]],
        )?,
    };
    Ok(Output::with_status(out, decided))
}

fn geodesics_scan(
    cfg: &RunConfig,
    metric: Option<&str>,
    n: u32,
    samples: usize,
    speed_min: f64,
    speed_max: f64,
) -> Result<Output, CliError> {
    if !(speed_min > 0.0 && speed_max > speed_min) {
        return Err(CliError::Usage("need 0 < speed-min < speed-max".into()));
    }
    let (metric, m) = metric_for(cfg, metric, n)?;
    let dim = m.ambient_dim();
    let mut p = vec![0.0; dim];
    p[0] = 1.0;
    m.project_point(&mut p);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let guesses: Vec<Vec<f64>> = (0..samples)
        .map(|_| {
            let speed = rand::Rng::gen_range(&mut rng, speed_min..speed_max);
            random_tangent(&m, &p, speed, &mut rng)
        })
        .collect();
    let results = spectrum_scan(&m, &p, &guesses, &cfg.shooting_options(), &cfg.index_options());
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(row) => rows.push(row),
            Err(e @ (sphere_strings::Error::NoConvergence { .. } | sphere_strings::Error::ConstraintDrift { .. })) => {
                failures.push(format!("guess {}: {}", i, e))
            }
            Err(e) => return Err(e.into()),
        }
    }
    if rows.is_empty() && samples > 0 {
        return Err(sphere_strings::Error::NoConvergence { iterations: cfg.shooting.max_iterations, best_residual: f64::NAN }.into());
    }
    rows.sort_by(|a, b| a.length.total_cmp(&b.length));
    let cells: Vec<Vec<String>> =
        rows.iter().map(|r| vec![num(r.length), num(r.energy), r.index.to_string(), r.nullity_flag.to_string()]).collect();
    let header = ["length", "energy", "index", "nullity_flag"];
    let out = match cfg.format {
        Format::Text => format!("metric {} n = {} seed {}\n{}", metric, n, cfg.seed, text_table(&header, &cells)),
        Format::Json => json_out(json!({ "metric": metric, "n": n, "seed": cfg.seed, "rows": rows, "failures": failures })),
        Format::Csv => csv_out(&header, &cells)?,
    };
    let mut o = Output::pass(out);
    for f in failures {
        o = o.note(format!("no convergence from {}", f));
    }
    Ok(o)
}

fn resonance(cfg: &RunConfig, a: &ResonanceArgs) -> Result<Output, CliError> {
    let r = resonance_check(a.n, a.cutoff)?;
    let passed = r.inside_strip(r.beta);
    let cells: Vec<Vec<String>> = r
        .records
        .iter()
        .map(|x| vec![x.generator.clone(), x.degree.to_string(), x.cr.to_string(), x.deviation.clone()])
        .collect();
    let header = ["generator", "degree", "cr", "deviation"];
    let out = match cfg.format {
        Format::Text => {
            let mut s = text_fields(&[
                ("n", r.n.to_string()),
                ("cutoff", r.cutoff.to_string()),
                ("ω", r.omega.clone()),
                ("μ", r.mu.to_string()),
                ("ᾱ", format!("{}/π", r.alpha_bar_times_pi)),
                ("β", r.beta.to_string()),
                ("extremal", r.worst.join(", ")),
                ("strip", pass_word(passed).into()),
            ]);
            s.push_str(&text_table(&header, &cells));
            s
        }
        Format::Json => {
            let mut obj = r.to_json();
            obj["passed"] = json!(passed);
            json_out(obj)
        }
        Format::Csv => csv_out(&header, &cells)?,
    };
    Ok(Output::with_status(out, passed))
}

fn parse_entry(s: &str) -> Result<DensityEntry, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Usage(format!("--entry {:?}: expected label:length:alpha", s));
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(DensityEntry {
        label: parts[0].to_string(),
        length: parts[1].trim().parse().map_err(|_| bad())?,
        alpha: parts[2].trim().parse().map_err(|_| bad())?,
    })
}

fn density(cfg: &RunConfig, a: &DensityArgs) -> Result<Output, CliError> {
    let mut entries: Vec<DensityEntry> = a.entries.iter().map(|e| parse_entry(e)).collect::<Result<_, _>>()?;
    let mut metric = None;
    if entries.is_empty() {
        // the prime antipodal geodesic through e0 in direction e1
        let geo = GeodesicArgs { metric: a.metric.clone(), n: a.n, point: None, direction: None, level: 0 };
        let (text, m, s) = shoot(cfg, &geo)?;
        let avg = average_index(&m, &s.record, a.iterates, &cfg.index_options())?;
        entries.push(DensityEntry { label: "prime".into(), length: s.record.length, alpha: avg.alpha });
        metric = Some(text);
    }
    let rep = density_sum(a.n, &entries, a.eps, a.alpha_bar)?;
    let cells: Vec<Vec<String>> = entries
        .iter()
        .map(|e| vec![e.label.clone(), num(e.length), num(e.alpha), rep.in_band.contains(&e.label).to_string()])
        .collect();
    let header = ["label", "length", "alpha", "in_band"];
    let out = match cfg.format {
        Format::Text => {
            let mut s = text_fields(&[
                ("n", rep.n.to_string()),
                ("ᾱ", num(rep.alpha_bar)),
                ("ε", num(rep.eps)),
                ("Σ 1/α", num(rep.sum)),
                ("bound", num(rep.bound)),
                ("status", pass_word(rep.passed).into()),
            ]);
            s.push_str(&text_table(&header, &cells));
            s
        }
        Format::Json => json_out(json!({ "metric": metric, "entries": entries, "report": rep })),
        Format::Csv => csv_out(&header, &cells)?,
    };
    Ok(Output::with_status(out, rep.passed))
}

fn show_config(cfg: &RunConfig) -> Result<Output, CliError> {
    let out = match cfg.format {
        Format::Json => json_out(serde_json::to_value(cfg).map_err(|e| CliError::Output(e.to_string()))?),
        Format::Text | Format::Csv => cfg.to_toml(),
    };
    Ok(Output::pass(out))
}
