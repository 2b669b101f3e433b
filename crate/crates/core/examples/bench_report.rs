//! Timing runs from a manifest, reported as Markdown and CSV.

use std::path::Path;

use mlcore::bench::{emit_report, run_bench, BenchManifest, ReportFormat};

fn main() -> mlcore::Result<()> {
    let text = "\
# name, task, data, k, options
randu-kd, knn, gen:20000x10:1, 3, tree=kd, traversal=dual
randu-cover, knn, gen:20000x10:1, 3, tree=cover, traversal=dual
randu-naive, knn, gen:20000x10:1, 3, traversal=naive
blobs, kmeans, gen:5000x4:2, 8, init=kmeanspp, max-iterations=1000
missing, knn, no/such/file.csv, 3
";
    let mut manifest = BenchManifest::parse(text, Path::new("."))?;
    manifest.trials = 3;
    let report = run_bench(&manifest);
    print!("{}", emit_report(&report, ReportFormat::Markdown));
    println!();
    print!("{}", emit_report(&report, ReportFormat::Csv));
    Ok(())
}
