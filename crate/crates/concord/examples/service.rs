//! Drives a judgment session through the session store that backs the
//! HTTP service, then prints the analysis as the service would return it.
//! To run the HTTP server itself: `concord serve --addr 127.0.0.1:8080`.
//!
//! cargo run -p concord --example service

use concord::service::SessionStore;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let store = SessionStore::in_memory();
    let session = store.create(vec!["tea".into(), "coffee".into(), "juice".into()])?;
    for (i, j, v) in [(1, 2, 2.0), (2, 3, 2.0), (1, 3, 5.0)] {
        store.put_judgment(&session.id, i, j, v)?;
    }
    let analysis = store.analysis(&session.id)?;
    println!("{}", serde_json::to_string_pretty(&analysis)?);
    Ok(())
}
