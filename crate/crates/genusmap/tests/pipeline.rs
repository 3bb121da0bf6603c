use genusmap::cms::{check_label_distance, cms_forward, cms_inverse, validate_quadrangulation, PointedQuadrangulation};
use genusmap::gtree::WellLabeledGTree;
use genusmap::metrics::MetricSample;
use genusmap::random::stream_chooser;
use genusmap::sampler::{sample_gtree, Mode, Sampler};
use genusmap::scheme::{decompose, recompose, validate_compatible, DecompositionQuadruple};

#[test]
fn sample_decompose_and_biject_in_genus_one_and_two() {
    for (genus, n) in [(1usize, 150usize), (2, 10)] {
        for i in 0..4 {
            let t = sample_gtree(genus, n, &mut stream_chooser(11, i)).unwrap();
            assert_eq!((t.genus(), t.n_edges()), (genus, n));

            let quad = decompose(&t).unwrap();
            assert!(validate_compatible(&quad).0);
            assert_eq!(recompose(&quad).unwrap(), t);

            for eps in [-1i8, 1] {
                let pq = cms_forward(&t, eps);
                validate_quadrangulation(&pq.map).unwrap();
                assert_eq!(pq.map.genus(), genus);
                assert_eq!(pq.map.vertex_count(), n + 2 - 2 * genus);
                assert!(check_label_distance(&pq));
                assert_eq!(cms_inverse(&pq).unwrap(), (t.clone(), eps));
            }
        }
    }
}

#[test]
fn json_records_round_trip() {
    let t = sample_gtree(1, 30, &mut stream_chooser(12, 0)).unwrap();
    let back: WellLabeledGTree = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
    assert_eq!(back, t);

    let quad = decompose(&t).unwrap();
    let back: DecompositionQuadruple = serde_json::from_str(&serde_json::to_string(&quad).unwrap()).unwrap();
    assert_eq!(back, quad);

    let pq = cms_forward(&t, -1);
    let back: PointedQuadrangulation = serde_json::from_str(&serde_json::to_string(&pq).unwrap()).unwrap();
    assert_eq!(back, pq);
}

#[test]
fn float_and_exact_samplers_produce_valid_metric_samples() {
    for mode in [Mode::Exact, Mode::Float] {
        let sampler = Sampler::new(1, 300, mode).unwrap();
        let t = sampler.sample_gtree(&mut stream_chooser(13, 0)).unwrap();
        let s = MetricSample::new(t, 1).unwrap();
        let len = 2 * s.n();
        let pairs: Vec<(usize, usize)> = (0..=len).step_by(13).flat_map(|i| (0..=len).step_by(17).map(move |j| (i, j))).collect();
        assert_eq!(s.sandwich_violations(&pairs).unwrap(), 0);
        assert!(s.two_point_value() > 0.0);
    }
}
