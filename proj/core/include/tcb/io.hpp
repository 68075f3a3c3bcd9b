#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <tcb/appearance.hpp>
#include <tcb/geometry.hpp>
#include <tcb/metrics.hpp>
#include <tcb/simulator.hpp>

namespace tcb {

/// Sequence header data carried next to the detection/embedding files.
struct SequenceMeta {
    std::string name = "sequence";
    double fps = 25.0;
    std::int64_t frame_count = 0;
    double image_w = 0.0;
    double image_h = 0.0;
    int embedding_dim = 0;
};

/// Detections grouped by frame; in-frame row order is preserved and frames
/// iterate in ascending order regardless of file order.
using DetectionMap = std::map<std::int64_t, std::vector<ScoredBox>>;

/// Parses MOTChallenge-style rows `frame,id,x,y,w,h,conf,a,b,c` (id and the
/// trailing triple may be -1). Malformed rows fail with the line number.
DetectionMap read_detections(const std::filesystem::path& path);

/// Writes detections in the same row format with -1 ids, 6-decimal reals.
void write_detections(const std::filesystem::path& path, const DetectionMap& detections);

/// One embedding in the binary stream, keyed by (frame, in-frame row).
struct EmbeddingRecord {
    std::uint32_t frame = 0;
    std::uint32_t det_index = 0;
    Embedding values;
};

struct EmbeddingFile {
    int dim = 0;
    std::vector<EmbeddingRecord> records;
};

/// Binary layout, little-endian: magic "TCBE", version u16 = 1, dim u16,
/// record count u32, then (frame u32, det_index u32, dim x f32) per record.
EmbeddingFile read_embeddings(const std::filesystem::path& path);
void write_embeddings(const std::filesystem::path& path, int dim,
                      std::span<const EmbeddingRecord> records);

/// Zips detections and embeddings into per-frame tracker inputs; every
/// detection must have exactly one embedding at its (frame, row index).
std::vector<FrameInput> combine_inputs(const DetectionMap& detections,
                                       const EmbeddingFile& embeddings);

/// Ground-truth / result rows through the same CSV surface.
std::vector<TrackRecord> read_track_records(const std::filesystem::path& path);

/// Rows `frame,track_id,x,y,w,h,conf,-1,-1,-1` sorted by (frame, track_id),
/// 6-decimal reals; byte-deterministic.
void write_results(const std::filesystem::path& path, std::span<const TrackRecord> records);

SequenceMeta read_meta(const std::filesystem::path& path);
void write_meta(const std::filesystem::path& path, const SequenceMeta& meta);

/// Bundle directory layout: det.txt, gt.txt, embeddings.tcbe,
/// provenance.txt, meta.txt. Simulated and real data flow through the same
/// readers.
void write_bundle(const std::filesystem::path& dir, const ScenarioBundle& bundle,
                  const SequenceMeta& meta);
ScenarioBundle read_bundle(const std::filesystem::path& dir);

}  // namespace tcb
