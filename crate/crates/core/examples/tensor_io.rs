//! Write a tensor in the RLT format, read it back, and show the header layout.

use relax::{read_tensor, write_tensor, Tensor};

fn main() -> relax::Result<()> {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("acts.rlt");

    // channel-last activation map, 3x2 spatial, 4 channels
    let data: Vec<f32> = (0..24).map(|i| i as f32 * 0.5 - 3.0).collect();
    let t = Tensor::new(vec![3, 2, 4], data)?;
    write_tensor(&t, &path)?;

    let bytes = std::fs::read(&path).expect("read back");
    println!(
        "magic {:?}, rank {}",
        std::str::from_utf8(&bytes[..4]).unwrap(),
        bytes[4]
    );
    println!(
        "file is {} bytes: 5 + 4*rank header, 4 bytes per value",
        bytes.len()
    );

    let back = read_tensor(&path)?;
    assert_eq!(back, t);
    println!("round trip ok, shape {:?}", back.shape());

    // corrupt payloads are rejected with a byte offset
    let err = Tensor::decode(&bytes[..bytes.len() - 3]).unwrap_err();
    println!("truncated file: {err}");
    Ok(())
}
