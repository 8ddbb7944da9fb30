pub mod graph_file;
pub mod report;

pub use graph_file::{read_graph, write_graph};
pub use report::render_report;
