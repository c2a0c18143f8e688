//! Rewrites the JSON fixture documents from the transcriptions.
//! Honors PSICONG_DATA_DIR.

use psicong::sequences::{fixture_ids, fixture_path, transcribed_fixture};

fn main() {
    for key in fixture_ids() {
        let p = transcribed_fixture(key.id, key.e).expect("transcription parses");
        let path = fixture_path(key.id, key.e);
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        let text = serde_json::to_string_pretty(&p.to_json()).unwrap();
        std::fs::write(&path, text + "\n").unwrap();
        println!("{}", path.display());
    }
}
