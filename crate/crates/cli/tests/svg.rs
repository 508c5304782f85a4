//! Plots are well-formed XML with the expected structure.

mod common;

use common::{ok, read};
use geotsp::experiments::ExperimentReport;
use geotsp_cli::{render_svg, PlotError, PlotSpec};
use tempfile::TempDir;

fn parse(text: &str) -> roxmltree::Document<'_> {
    roxmltree::Document::parse(text).expect("valid XML")
}

fn with_class<'a>(doc: &'a roxmltree::Document<'a>, tag: &str, class: &str) -> Vec<roxmltree::Node<'a, 'a>> {
    doc.descendants().filter(|n| n.has_tag_name(tag) && n.attribute("class") == Some(class)).collect()
}

#[test]
fn geodesic_overlay_has_one_point_per_hop_plus_one() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "--n", "200", "--p", "0.05", "--seed", "23", "--out", "g.graph"]);
    let run = ok(dir.path(), &["geodesic", "--input", "g.graph", "--source", "3", "--target", "150", "--plot"]);
    let hops: usize =
        run.stdout.split_whitespace().find_map(|w| w.strip_prefix("hops=")).expect("reachable pair").parse().unwrap();
    assert!(hops >= 2, "pick a pair that is not adjacent");
    let text = read(&dir.path().join("geotsp-out/geodesic.svg"));
    let doc = parse(&text);
    let path = with_class(&doc, "polyline", "path");
    assert_eq!(path.len(), 1);
    assert_eq!(path[0].attribute("points").unwrap().split_whitespace().count(), hops + 1);
    let cloud = with_class(&doc, "g", "cloud");
    assert_eq!(cloud[0].children().filter(|n| n.has_tag_name("circle")).count(), 200);
    assert!(doc.descendants().any(|n| n.has_tag_name("metadata") && n.text().unwrap().contains("run_config")));
}

#[test]
fn tour_overlay_closes_the_cycle() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "--n", "60", "--p", "0.6", "--seed", "2", "--out", "g.graph"]);
    ok(dir.path(), &["tour", "--input", "g.graph", "--plot"]);
    let text = read(&dir.path().join("geotsp-out/tour.svg"));
    let doc = parse(&text);
    let points: Vec<&str> =
        with_class(&doc, "polyline", "path")[0].attribute("points").unwrap().split_whitespace().collect();
    assert_eq!(points.len(), 61);
    assert_eq!(points.first(), points.last());
}

#[test]
fn loglog_shows_fitted_slope() {
    let dir = TempDir::new().unwrap();
    let run =
        ok(dir.path(), &["fit-scaling", "--n-grid", "256,512,1024,2048", "--p", "0.3", "--trials", "2", "--plot"]);
    let slope: f64 = run.stdout.split_whitespace().find_map(|w| w.strip_prefix("slope_n=")).unwrap().parse().unwrap();
    let text = read(&dir.path().join("geotsp-out/scaling_fit.svg"));
    let doc = parse(&text);
    assert_eq!(with_class(&doc, "line", "fit").len(), 1);
    let legend: Vec<String> = with_class(&doc, "g", "legend")
        .iter()
        .filter_map(|g| g.descendants().find_map(|n| n.text().map(str::to_owned)))
        .collect();
    assert!(legend.iter().any(|l| l.starts_with(&format!("fit slope {slope:.4}"))), "{legend:?}");
    let stamp = with_class(&doc, "text", "stamp");
    assert!(stamp[0].text().unwrap().starts_with("scaling_fit seed=1"));
}

#[test]
fn threshold_scatter_has_one_series_per_omega() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &["scan-threshold", "--n", "1000", "--omega-grid", "0.5,1,4", "--pairs", "10", "--trials", "2", "--plot"],
    );
    let text = read(&dir.path().join("geotsp-out/threshold_scan.svg"));
    let doc = parse(&text);
    let keys: Vec<&str> = with_class(&doc, "g", "series").iter().map(|g| g.attribute("data-key").unwrap()).collect();
    assert_eq!(keys, ["0.5", "1", "4"]);
}

#[test]
fn every_experiment_plot_parses() {
    let dir = TempDir::new().unwrap();
    let runs: [&[&str]; 4] = [
        &["verify-lemmas", "--n-max", "6", "--plot"],
        &["concentration", "--blocks", "4,16", "--trials", "200", "--plot"],
        &["continuity", "--n", "300", "--delta-grid", "0,0.1", "--trials", "2", "--plot"],
        &["estimate-beta", "--n-grid", "128,256,512,1024", "--trials", "2", "--plot"],
    ];
    for args in runs {
        ok(dir.path(), args);
    }
    ok(dir.path(), &["generate", "--n", "50", "--plot", "--out", "g.graph"]);
    for name in ["verify_permutation_lemma", "concentration_check", "continuity_check", "estimate_beta", "generate"] {
        let text = read(&dir.path().join(format!("geotsp-out/{name}.svg")));
        let doc = parse(&text);
        assert_eq!(doc.root_element().tag_name().name(), "svg");
        assert!(doc.descendants().any(|n| n.attribute("class") == Some("xlabel")));
        assert!(doc.descendants().any(|n| n.attribute("class") == Some("stamp")));
    }
}

#[test]
fn empty_report_is_an_error() {
    let report = ExperimentReport::new("empty", &serde_json::json!({}), 0, &["x", "y"]).unwrap();
    let err = render_svg(&report, &PlotSpec::scatter("x", "y", None)).unwrap_err();
    assert!(matches!(err, PlotError::EmptyReport(_)));
}

#[test]
fn labels_are_escaped() {
    let mut report = ExperimentReport::new("a<b&c", &serde_json::json!({"note": "x<y"}), 0, &["x", "y"]).unwrap();
    report.push_row(0, vec![1.0, 2.0]);
    let text = render_svg(&report, &PlotSpec::scatter("x", "y", None)).unwrap();
    let doc = parse(&text);
    assert_eq!(doc.descendants().find(|n| n.has_tag_name("title")).unwrap().text(), Some("a<b&c"));
}
