use proptest::prelude::*;
use ruled_core::io::{format_report, parse_key_values, read_obj, read_sampled_surface, write_obj, write_sampled_surface};
use ruled_core::mesh::mesh_surface;
use ruled_core::similarity::check_similar_surfaces;
use ruled_core::synthesis::{synthesize_similar, SampledSurface, SynthesisOptions};
use ruled_core::{arc_length_map, frenet_frame, parse_expression, presets, CurveSpec, Execution, SimilarityOptions, Vector3};

fn helix(a: f64, b: f64, c: f64) -> CurveSpec {
    CurveSpec::parse(
        &format!("{a}*cos(u)"),
        &format!("{b}*sin(u)"),
        &format!("{c}*u + 0.1*u^2"),
        0.0,
        4.0,
        256,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn arc_length_inverts(a in 0.5f64..3.0, b in 0.5f64..3.0, c in 0.1f64..2.0, t in 0.0f64..1.0) {
        let curve = helix(a, b, c);
        let map = arc_length_map(&curve, Execution::Sequential).unwrap();
        let u = 4.0 * t;
        prop_assert!((map.u_at(map.s_at(u)) - u).abs() < 1e-9);
        let s = map.total_length() * t;
        prop_assert!((map.s_at(map.u_at(s)) - s).abs() < 1e-9);
    }

    #[test]
    fn sampled_surface_csv_round_trips(
        rows in prop::collection::vec((0.001f64..1.0, prop::array::uniform6(-1e6f64..1e6)), 4..40)
    ) {
        let mut s = Vec::new();
        let mut acc = 0.0;
        for (step, _) in &rows {
            acc += step;
            s.push(acc);
        }
        let c = rows.iter().map(|(_, r)| Vector3::new(r[0], r[1], r[2])).collect();
        let q = rows.iter().map(|(_, r)| Vector3::new(r[3], r[4], r[5])).collect();
        let n = SampledSurface::new(s, c, q).unwrap();
        let mut buf = Vec::new();
        write_sampled_surface(&mut buf, &n).unwrap();
        prop_assert_eq!(read_sampled_surface(buf.as_slice()).unwrap(), n);
    }

    #[test]
    fn obj_round_trips(nu in 2usize..12, nv in 2usize..6, v in 0.1f64..5.0, preset in 0usize..presets::NAMES.len()) {
        let n = presets::by_name(presets::NAMES[preset]).unwrap();
        let m = mesh_surface(&n, -v, v, nu, nv).unwrap();
        prop_assert_eq!(m.vertices.len(), nu * nv);
        prop_assert_eq!(m.triangles.len(), 2 * (nu - 1) * (nv - 1));
        let mut buf = Vec::new();
        write_obj(&mut buf, &m, "mesh").unwrap();
        let (vertices, faces) = read_obj(buf.as_slice()).unwrap();
        prop_assert_eq!(vertices, m.vertices);
        prop_assert_eq!(faces, m.triangles);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn synthesized_surfaces_are_similar(a in 0.5f64..2.0, b in 0.0f64..0.4, theta in 0.2f64..1.4) {
        let beta = presets::hyperboloid();
        let lambda = parse_expression(&format!("{a} + {b}*sin(u)")).unwrap();
        let theta = parse_expression(&format!("{theta}")).unwrap();
        let opts = SynthesisOptions { samples: 4096, ..Default::default() };
        let out = synthesize_similar(&beta, &lambda, &theta, Vector3::zeros(), &opts).unwrap();
        let alpha = out.to_surface("alpha").unwrap();
        let r = check_similar_surfaces(&beta, &alpha, &SimilarityOptions::default()).unwrap();
        prop_assert!(r.verdict, "{}", format_report(&r));
        let t = r.lambda.unwrap();
        for x in t.samples.iter().step_by(16) {
            let want = lambda.eval(x.s_beta).unwrap();
            prop_assert!((x.lambda - want).abs() <= 1e-4 * want, "{} vs {}", x.lambda, want);
        }
    }
}

#[test]
fn strategies_are_bit_identical() {
    for name in ["helicoid", "hyperboloid", "conoid", "offset-hyperboloid"] {
        let n = presets::by_name(name).unwrap();
        let seq = frenet_frame(&n.clone().with_execution(Execution::Sequential)).unwrap();
        let par = frenet_frame(&n.with_execution(Execution::Parallel)).unwrap();
        assert_eq!(seq.samples(), par.samples(), "{name}");
        assert_eq!(seq.total_curvature().to_bits(), par.total_curvature().to_bits());
    }

    let beta = presets::by_name("offset-hyperboloid").unwrap();
    let lambda = parse_expression("1.2 + 0.3*sin(u)").unwrap();
    let theta = parse_expression("0.5 + 0.2*cos(u)").unwrap();
    let run = |exec| {
        let opts = SynthesisOptions { samples: 2048, exec };
        synthesize_similar(&beta.clone().with_execution(exec), &lambda, &theta, Vector3::zeros(), &opts).unwrap()
    };
    let (seq, par) = (run(Execution::Sequential), run(Execution::Parallel));
    assert_eq!(seq, par);

    let alpha = seq.to_surface("alpha").unwrap();
    let report = |exec| {
        let opts = SimilarityOptions { exec, offset_search: true, ..Default::default() };
        let b = beta.clone().with_execution(exec);
        let a = alpha.clone().with_execution(exec);
        format_report(&check_similar_surfaces(&b, &a, &opts).unwrap())
    };
    assert_eq!(report(Execution::Sequential), report(Execution::Parallel));
}

#[test]
fn report_values_read_back() {
    let r = check_similar_surfaces(&presets::helicoid(), &presets::similar_helicoid(), &SimilarityOptions::default()).unwrap();
    let text = format_report(&r);
    let kv = parse_key_values(&text);
    let get = |k: &str| kv.iter().find(|(key, _)| key == k).map(|(_, v)| v.clone()).unwrap();
    assert_eq!(get("verdict"), "similar");
    let lambda = r.lambda.as_ref().unwrap();
    assert_eq!(get("lambda").parse::<f64>().unwrap(), lambda.mean());
    assert_eq!(get("lambda_max").parse::<f64>().unwrap(), lambda.max());
    assert_eq!(get("ruling_sup").parse::<f64>().unwrap(), r.deviations.ruling_sup);
    let rot: Vec<f64> = get("rotation").split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert_eq!(rot.len(), 9);
}
