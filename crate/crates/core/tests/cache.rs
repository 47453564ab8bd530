use std::fs;

use nilcat::cache::{encode_rep, entry_key, DiskCache, Manifest, RepStore};
use nilcat::nilhecke::NHRep;

#[test]
fn stored_blob_loads_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let disk = DiskCache::open(dir.path()).unwrap();
    let rep = NHRep::build(2, 3, 3).unwrap();
    disk.store(&rep).unwrap();
    let back = disk.load(2, 3, 3).unwrap().expect("cached");
    assert_eq!(encode_rep(&back), encode_rep(&rep));
}

#[test]
fn missing_entry_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let disk = DiskCache::open(dir.path()).unwrap();
    assert!(disk.load(1, 2, 5).unwrap().is_none());
    let store = RepStore::with_disk(disk.clone());
    assert_eq!(store.get(1, 2, 5).unwrap().dim(), 2);
    assert!(disk.load(1, 2, 5).unwrap().is_some());
}

#[test]
fn checksum_mismatch_is_discarded_and_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let disk = DiskCache::open(dir.path()).unwrap();
    disk.store(&NHRep::build(2, 2, 3).unwrap()).unwrap();
    let file = disk.manifest().entries[&entry_key(2, 2, 3)].file.clone();
    let path = dir.path().join(file);
    let mut bytes = fs::read(&path).unwrap();
    bytes[20] ^= 1;
    fs::write(&path, &bytes).unwrap();
    assert!(disk.load(2, 2, 3).unwrap().is_none());
    assert_eq!(disk.verify().invalid, vec![entry_key(2, 2, 3)]);
    let store = RepStore::with_disk(disk.clone());
    let rep = store.get(2, 2, 3).unwrap();
    assert!(rep.check_relations().is_ok());
    assert!(disk.verify().invalid.is_empty());
}

#[test]
fn other_version_manifest_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let disk = DiskCache::open(dir.path()).unwrap();
    disk.store(&NHRep::build(1, 3, 2).unwrap()).unwrap();
    let path = dir.path().join("manifest.json");
    let mut m: Manifest = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    m.version += 1;
    fs::write(&path, serde_json::to_vec(&m).unwrap()).unwrap();
    assert!(disk.manifest().entries.is_empty());
    assert!(disk.load(1, 3, 2).unwrap().is_none());
}

#[test]
fn garbage_manifest_is_treated_as_empty() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("manifest.json"), b"{not json").unwrap();
    let disk = DiskCache::open(dir.path()).unwrap();
    assert!(disk.manifest().entries.is_empty());
    disk.store(&NHRep::build(1, 1, 2).unwrap()).unwrap();
    assert_eq!(disk.manifest().entries.len(), 1);
}

#[test]
fn no_temporary_files_are_left_behind() {
    let dir = tempfile::tempdir().unwrap();
    let store = RepStore::with_disk(DiskCache::open(dir.path()).unwrap());
    for (n, l) in [(0, 2), (1, 2), (2, 2), (2, 3)] {
        store.get(n, l, 3).unwrap();
    }
    let mut names: Vec<String> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names.len(), 5, "{names:?}");
    assert!(names.iter().all(|n| n == "manifest.json" || n.ends_with(".bin")));
}

#[test]
fn concurrent_stores_keep_every_manifest_entry() {
    let dir = tempfile::tempdir().unwrap();
    let store = RepStore::with_disk(DiskCache::open(dir.path()).unwrap());
    std::thread::scope(|s| {
        for n in 0..=3 {
            let store = &store;
            s.spawn(move || store.get(n, 3, 5).unwrap());
        }
    });
    assert_eq!(store.disk().unwrap().manifest().entries.len(), 4);
}
