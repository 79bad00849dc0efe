//! Files in and out: dataset schema, results CSV, plots.

mod dataset;
mod plot;
mod results;

pub use dataset::{
    load_dataset, parse_dataset, save_synthetic, DatasetFile, LoadedDataset, ReferencePcm,
    SyntheticReference,
};
pub use plot::{emit_plot, plot_series, render_svg, Panel, Series};
pub use results::{read_results, write_results, ResultsRow, ResultsTable, RESULTS_HEADER};
