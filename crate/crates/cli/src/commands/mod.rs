pub mod curves;
pub mod data;
pub mod fit;
pub mod props;
pub mod simulate;
