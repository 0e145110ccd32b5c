use grafo::learner::{EdgeRanker, FixedRanker, ForestRanker};
use grafo::simulate::{sample_with_edge_prob, DagKind};
use grafo::stability::{raw_select, stability_select, subsample_rankings, StabilityParams};
use grafo::{Column, Edge, Error, MixedDataset, RankedEdges};

fn data(p: usize, n: usize) -> MixedDataset {
    let model = sample_with_edge_prob(DagKind::Gaussian, p, 0.3, 1).unwrap();
    model.sample_data(n, 1).unwrap()
}

#[test]
fn fixed_ranking_is_selected_every_time() {
    let edges = vec![Edge::new(0, 1), Edge::new(2, 3)];
    let learner = FixedRanker { edges: edges.clone() };
    let params = StabilityParams { expected_fp_bound: 1.0, n_sub: 10, ..Default::default() };
    let graph = stability_select(&data(6, 40), &learner, &params).unwrap();
    assert_eq!(graph.selected, edges);
    assert_eq!(graph.frequency(Edge::new(0, 1)), 1.0);
    assert_eq!(graph.frequency(Edge::new(1, 2)), 0.0);
}

#[test]
fn empty_ranking_selects_nothing() {
    let graph = stability_select(&data(6, 40), &FixedRanker { edges: vec![] }, &StabilityParams::default()).unwrap();
    assert!(graph.selected.is_empty());
    let mut tsv = Vec::new();
    graph.write_tsv(&mut tsv).unwrap();
    assert_eq!(String::from_utf8(tsv).unwrap(), "i\tj\tfrequency\tselected\n");
}

#[test]
fn outputs_are_formatted() {
    let learner = FixedRanker { edges: vec![Edge::new(1, 3)] };
    let d = data(4, 20);
    let params = StabilityParams { expected_fp_bound: 1.0, n_sub: 4, seed: 3, ..Default::default() };
    let graph = stability_select(&d, &learner, &params).unwrap();
    let mut tsv = Vec::new();
    graph.write_tsv(&mut tsv).unwrap();
    assert_eq!(String::from_utf8(tsv).unwrap(), "i\tj\tfrequency\tselected\n1\t3\t1\t1\n");
    let mut dot = Vec::new();
    graph.write_dot(&mut dot, &d.names()).unwrap();
    let dot = String::from_utf8(dot).unwrap();
    assert!(dot.starts_with("graph cig {"));
    assert!(dot.contains("1 -- 3"));
    let meta = serde_json::to_value(graph.metadata("fixed", &d.names(), d.n_rows())).unwrap();
    assert_eq!(meta["q"], 1);
    assert_eq!(meta["n_sub"], 4);
    assert_eq!(meta["seed"], 3);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let d = data(8, 60);
    let learner = ForestRanker { params: grafo::forest::ForestParams { n_trees: 20, ..Default::default() } };
    let params = StabilityParams { expected_fp_bound: 2.0, n_sub: 8, seed: 11, ..Default::default() };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| stability_select(&d, &learner, &params).unwrap())
    };
    assert_eq!(run(1), run(4));
}

struct Failing;

impl EdgeRanker for Failing {
    fn name(&self) -> &str {
        "failing"
    }

    fn rank(&self, _: &MixedDataset, _: u64) -> grafo::Result<RankedEdges> {
        Err(Error::SingleClass)
    }
}

#[test]
fn learner_failing_everywhere_is_an_error() {
    let err = stability_select(&data(4, 20), &Failing, &StabilityParams::default()).unwrap_err();
    assert!(matches!(err, Error::SingleClass));
    let subs = subsample_rankings(&data(4, 20), &Failing, 5, 0);
    assert_eq!(subs.failed(), 5);
    assert!(subs.counts(3).iter().all(|&c| c == 0));
}

#[test]
fn raw_select_cuts_at_q() {
    let learner = FixedRanker { edges: vec![Edge::new(0, 1), Edge::new(0, 2), Edge::new(1, 2)] };
    assert_eq!(raw_select(&data(4, 10), &learner, 2, 0).unwrap(), vec![Edge::new(0, 1), Edge::new(0, 2)]);
}

#[test]
fn too_few_rows() {
    let d = MixedDataset::new(vec![
        Column::continuous("a", vec![1.0, 2.0, 3.0]),
        Column::continuous("b", vec![3.0, 1.0, 2.0]),
    ])
    .unwrap();
    assert_eq!(stability_select(&d, &FixedRanker { edges: vec![] }, &StabilityParams::default()).unwrap_err().kind(), "param");
}
