use projrig::catalog::{self, Catalog, CircleRoot, EntryData};
use projrig::config::ConfigFile;
use projrig::flex::{self, FlexOptions};
use projrig::rigidity::{self, Verdict, DEFAULT_RANK_THRESHOLD};
use projrig::stress;
use projrig::symmetry;
use projrig::{Error, Rational, Scalar};

#[test]
fn every_entry_verifies() {
    let cat = Catalog::standard();
    assert!(cat.names().len() >= 6);
    for name in cat.names() {
        let e = cat.build(name).unwrap();
        let bad = match &e.data {
            EntryData::Exact(x) => x.realization.verify(),
            EntryData::Float(x) => x.realization.verify(),
        };
        assert!(bad.is_empty(), "{name}: {bad:?}");
    }
}

#[test]
fn signatures() {
    let label = |name: &str| Catalog::standard().build(name).unwrap().geometry().signature().to_string();
    assert_eq!(label("desargues"), "10_3");
    assert_eq!(label("cyclic-10-3"), "10_3");
    assert_eq!(label("cyclic-20-4"), "20_4");
    let e = Catalog::standard().build("cyclic-20-4").unwrap();
    assert_eq!(e.geometry().num_incidences(), 80);
    assert_eq!(e.geometry().sparsity_counts().excess, 8);
}

#[test]
fn desargues_is_flexible_with_three_motions() {
    let e = catalog::desargues().unwrap();
    assert_eq!(
        rigidity::rigidity_verdict(&e.realization, 0.0).unwrap(),
        Verdict::Flexible { nontrivial_dim: 3 }
    );
    assert!(e.realization.degeneracy_report().is_clean());
}

#[test]
fn desargues_perturbed_point_breaks_three_incidences() {
    let e = catalog::desargues().unwrap();
    let g = e.realization.geometry().clone();
    // No line through b is vertical or horizontal, so all three feel a shift in x.
    let b = g.point_index("b").unwrap();
    let mut points = e.realization.points().to_vec();
    points[b][0] = points[b][0].clone() + Rational::from_ratio(1, 1000);
    let r = projrig::Realization::new(g, points, e.realization.lines().to_vec()).unwrap();
    assert_eq!(r.verify().len(), 3);
}

#[test]
fn desargues_cokernel_stress_agrees() {
    let e = catalog::desargues().unwrap();
    let m = rigidity::build_rigidity_matrix(&e.realization).unwrap();
    let cok = stress::cokernel_stresses(&m, 0.0);
    assert_eq!(cok.len(), 1);
    let eq = stress::chart_stress_equivalence(&e.realization, &cok[0], 0.0).unwrap();
    assert!(eq.row_dependence && eq.equilibrium && eq.combinatorial);
}

#[test]
fn cyclic_10_3_and_rotation_group() {
    let e = catalog::cyclic_10_3().unwrap();
    let g = e.group("rotation").unwrap();
    assert_eq!(g.len(), 5);
    assert!(symmetry::check_group_preserves(&e.realization, &g));
    // The construction lemma: each m_i passes through a pentagon vertex.
    let geom = e.realization.geometry();
    for i in 0..5 {
        let m = geom.line_index(&format!("m{i}")).unwrap();
        let vs: Vec<&str> = geom
            .points_on(m)
            .into_iter()
            .map(|p| geom.points()[p].as_str())
            .filter(|n| n.starts_with('v'))
            .collect();
        assert_eq!(vs.len(), 1);
    }
}

#[test]
fn near_root_gives_a_different_construction() {
    let far = catalog::cyclic_10_3_with(CircleRoot::Far).unwrap();
    match catalog::cyclic_10_3_with(CircleRoot::Near) {
        Ok(near) => assert_ne!(near.realization.points(), far.realization.points()),
        Err(Error::Invalid(_)) | Err(Error::ZeroVector(_)) => {}
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn cyclic_20_4_pinned_has_no_motion() {
    let e = catalog::cyclic_20_4().unwrap();
    let g = e.realization.geometry();
    let pins: Vec<usize> = e.pins.iter().map(|p| g.point_index(p).unwrap()).collect();
    let motions = flex::pinned_motions(&e.realization, &pins, DEFAULT_RANK_THRESHOLD).unwrap();
    assert!(motions.is_empty());
    let err = flex::trace_flex(&e.realization, &pins, &vec![0.0; 80], &FlexOptions::default()).unwrap_err();
    assert_eq!(err, Error::ZeroMotion);
}

#[test]
fn d4_counts() {
    let e = catalog::d4_configuration().unwrap();
    let r = &e.realization;
    assert_eq!(r.geometry().num_points(), 13);
    assert_eq!(r.geometry().num_lines(), 12);
    let (m, a) = rigidity::analyze(r, 0.0).unwrap();
    assert_eq!((m.rows(), m.cols()), (42, 50));
    assert_eq!((a.rank, a.nullity, a.nontrivial_dim), (40, 10, 2));
    let half = symmetry::symmetric_analysis(r, &e.group("half-turn").unwrap(), 0.0).unwrap();
    assert_eq!(half.kernel.len(), 6);
    let full = symmetry::symmetric_analysis(r, &e.group("d4").unwrap(), 0.0).unwrap();
    assert_eq!(full.kernel.len(), 3);
    assert_eq!(e.group("d4").unwrap().len(), 4);
}

#[test]
fn autopolar_orbits() {
    let e = catalog::autopolar_hexagon().unwrap();
    let sa = symmetry::symmetric_analysis(&e.realization, &e.group("polarity").unwrap(), 0.0).unwrap();
    let st = &sa.orbit_matrix.structure;
    assert_eq!(st.element_orbits.len(), 6);
    assert_eq!(st.incidence_orbits.len(), 8);
    assert_eq!(sa.kernel.len(), 4);
    assert_eq!(sa.max_lift_residual, 0.0);
}

#[test]
fn autopolar_symmetric_trace_matches_closed_form() {
    let e = catalog::autopolar_hexagon().unwrap();
    let r = &e.realization;
    let g = r.geometry();
    let pins: Vec<usize> = e.pins.iter().map(|p| g.point_index(p).unwrap()).collect();
    let group = e.group("polarity").unwrap();
    let m_hat: Vec<f64> = flex::pinned_symmetric_motions(r, &group, &pins, 0.0).unwrap()[0]
        .iter()
        .map(Scalar::to_f64)
        .collect();
    let group_f = projrig::symmetry::CorrelationGroup::generate(
        &[projrig::symmetry::Correlation::polarity(projrig::Matrix::from_rows(
            3,
            &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, -1.0]],
        ))
        .unwrap()],
        10,
    )
    .unwrap();
    let opts = FlexOptions {
        steps: 10,
        step_size: 0.05,
        ..FlexOptions::default()
    };
    let trace = flex::symmetric_trace_flex(&r.to_f64(), &group_f, &m_hat, &pins, &opts).unwrap();
    let (p3, p5) = (g.point_index("p3").unwrap(), g.point_index("p5").unwrap());
    for s in &trace.samples {
        let c = s.realization.affine_chart().unwrap();
        let x3 = c.points[p3][0];
        // p5 follows p3 along the one-parameter family.
        let u = x3 - 2.0;
        assert!((c.points[p5][0] - (1.0 - u / (2.0 + u))).abs() < 1e-8);
        assert!(s.residual < 1e-9);
    }
    assert_eq!(trace.samples.len(), 11);
}

#[test]
fn export_round_trip_preserves_every_entry() {
    let cat = Catalog::standard();
    for name in cat.names() {
        let e = cat.build(name).unwrap();
        let file = ConfigFile::from_entry(&e);
        let again = ConfigFile::from_json(&file.to_json_pretty()).unwrap();
        assert_eq!(again, file, "{name}");
        match &e.data {
            EntryData::Exact(x) => {
                let c = again.configuration::<Rational>().unwrap();
                assert_eq!(&c.realization, &x.realization);
                assert_eq!(c.groups.len(), x.groups.len());
            }
            EntryData::Float(x) => {
                let c = again.configuration::<f64>().unwrap();
                assert_eq!(c.realization.points(), x.realization.points());
            }
        }
    }
}

#[test]
fn d4_flexes_trace_from_the_symmetric_realization() {
    let e = catalog::d4_configuration().unwrap();
    let r = &e.realization;
    let g = r.geometry();
    let pins: Vec<usize> = e.pins.iter().map(|p| g.point_index(p).unwrap()).collect();
    let opts = FlexOptions {
        steps: 5,
        ..FlexOptions::default()
    };
    for m in flex::pinned_motions(r, &pins, 0.0).unwrap() {
        let m: Vec<f64> = m.iter().map(Scalar::to_f64).collect();
        let scale = m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let m: Vec<f64> = m.iter().map(|x| x / scale).collect();
        let trace = flex::trace_flex(&r.to_f64(), &pins, &m, &opts).unwrap();
        assert_eq!(trace.samples.len(), 6);
        assert!(trace.max_residual() <= 1e-9);
    }
}

#[test]
fn exact_symmetric_motion_traces_in_float_coordinates() {
    let file = ConfigFile::from_entry(&Catalog::standard().build("d4").unwrap());
    let req = projrig::backend::TraceRequest {
        steps: 3,
        group: Some("dashed".into()),
        ..Default::default()
    };
    let trace = projrig::backend::backend("exact")
        .unwrap()
        .trace(&file, &req, &Default::default())
        .unwrap();
    assert_eq!(trace.samples.len(), 4);
    assert!(trace.max_residual() <= 1e-9);
}
