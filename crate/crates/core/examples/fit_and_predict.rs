//! Trains a MAPE model on a CSV file, saves it, reloads it and predicts.
//!
//!     cargo run --example fit_and_predict

use mape_regression::{fit, load_csv, predict, risk_report, summarize, LinearModel, LossKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/cars.csv");
    let ds = load_csv(path, "dist")?;
    let model = fit(&ds, LossKind::Mape)?;

    let json = serde_json::to_string_pretty(&model)?;
    println!("{json}");
    let reloaded: LinearModel = serde_json::from_str(&json)?;
    assert_eq!(reloaded, model);

    for speed in [5.0, 15.0, 25.0] {
        println!(
            "speed {speed:>4}: predicted distance {:.2}",
            reloaded.predict_row(&[speed])
        );
    }

    let predictions = predict(&model, ds.features())?;
    let report = risk_report(&predictions, &summarize(&ds)?, ds.target().as_slice())?;
    println!("training report: {report:?}");
    Ok(())
}
