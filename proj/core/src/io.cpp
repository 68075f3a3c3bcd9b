#include <tcb/io.hpp>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <tcb/config.hpp>

namespace tcb {

namespace {

struct CsvRow {
    std::int64_t frame = 0;
    std::int64_t id = -1;
    BBox box;
    double conf = 0.0;
};

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    return fields;
}

double parse_real(const std::string& s, const std::string& context) {
    try {
        std::size_t used = 0;
        const double value = std::stod(s, &used);
        while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw ValidationError(context + ": bad number '" + s + "'");
    }
}

std::int64_t parse_int(const std::string& s, const std::string& context) {
    const double real = parse_real(s, context);
    const std::int64_t value = static_cast<std::int64_t>(real);
    if (static_cast<double>(value) != real) {
        throw ValidationError(context + ": expected integer, got '" + s + "'");
    }
    return value;
}

// Shared CSV row reader; MOT-style files carry 7 to 10 fields.
std::vector<CsvRow> read_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path.string());

    std::vector<CsvRow> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string context = path.string() + ":" + std::to_string(line_no);
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() < 7 || fields.size() > 10) {
            throw ValidationError(context + ": expected 7-10 comma-separated fields, got " +
                                  std::to_string(fields.size()));
        }
        CsvRow row;
        row.frame = parse_int(fields[0], context);
        row.id = parse_int(fields[1], context);
        row.box = BBox{parse_real(fields[2], context), parse_real(fields[3], context),
                       parse_real(fields[4], context), parse_real(fields[5], context)};
        row.conf = parse_real(fields[6], context);
        if (!row.box.valid()) {
            throw ValidationError(context + ": box must have positive finite size");
        }
        rows.push_back(row);
    }
    return rows;
}

void write_line(std::ostream& out, std::int64_t frame, std::int64_t id, const BBox& box,
                double conf) {
    char line[256];
    std::snprintf(line, sizeof(line), "%lld,%lld,%.6f,%.6f,%.6f,%.6f,%.6f,-1,-1,-1\n",
                  static_cast<long long>(frame), static_cast<long long>(id), box.x, box.y,
                  box.w, box.h, conf);
    out << line;
}

template <typename T>
void put(std::ofstream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::ifstream& in, const std::string& context) {
    T value{};
    if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
        throw ValidationError(context + ": truncated embedding file");
    }
    return value;
}

}  // namespace

DetectionMap read_detections(const std::filesystem::path& path) {
    DetectionMap detections;
    for (const CsvRow& row : read_rows(path)) {
        detections[row.frame].push_back(ScoredBox::make(row.box, row.conf, {1.0}));
    }
    return detections;
}

void write_detections(const std::filesystem::path& path, const DetectionMap& detections) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    for (const auto& [frame, boxes] : detections) {
        for (const ScoredBox& box : boxes) {
            write_line(out, frame, -1, box.box, box.conf);
        }
    }
}

EmbeddingFile read_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    const std::string context = path.string();

    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "TCBE", 4) != 0) {
        throw ValidationError(context + ": bad magic, not an embedding file");
    }
    const auto version = take<std::uint16_t>(in, context);
    if (version != 1) {
        throw ValidationError(context + ": unsupported version " + std::to_string(version));
    }
    const auto dim = take<std::uint16_t>(in, context);
    if (dim == 0) throw ValidationError(context + ": zero embedding dimension");
    const auto count = take<std::uint32_t>(in, context);

    EmbeddingFile file;
    file.dim = dim;
    file.records.reserve(count);
    for (std::uint32_t r = 0; r < count; ++r) {
        EmbeddingRecord record;
        record.frame = take<std::uint32_t>(in, context);
        record.det_index = take<std::uint32_t>(in, context);
        record.values.resize(dim);
        for (int i = 0; i < dim; ++i) {
            record.values(i) = static_cast<double>(take<float>(in, context));
        }
        file.records.push_back(std::move(record));
    }
    char extra;
    if (in.read(&extra, 1)) {
        throw ValidationError(context + ": trailing bytes after declared records");
    }
    return file;
}

void write_embeddings(const std::filesystem::path& path, int dim,
                      std::span<const EmbeddingRecord> records) {
    if (dim < 1 || dim > 0xFFFF) throw ValidationError("write_embeddings: dim out of range");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path.string());

    out.write("TCBE", 4);
    put<std::uint16_t>(out, 1);
    put<std::uint16_t>(out, static_cast<std::uint16_t>(dim));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(records.size()));
    for (const EmbeddingRecord& record : records) {
        if (record.values.size() != dim) {
            throw ValidationError("write_embeddings: record dimension mismatch");
        }
        put<std::uint32_t>(out, record.frame);
        put<std::uint32_t>(out, record.det_index);
        for (int i = 0; i < dim; ++i) {
            put<float>(out, static_cast<float>(record.values(i)));
        }
    }
}

std::vector<FrameInput> combine_inputs(const DetectionMap& detections,
                                       const EmbeddingFile& embeddings) {
    std::map<std::int64_t, std::map<std::uint32_t, const EmbeddingRecord*>> by_frame;
    for (const EmbeddingRecord& record : embeddings.records) {
        auto& slot = by_frame[record.frame][record.det_index];
        if (slot != nullptr) {
            throw ValidationError("combine_inputs: duplicate embedding for frame " +
                                  std::to_string(record.frame) + " index " +
                                  std::to_string(record.det_index));
        }
        slot = &record;
    }

    std::vector<FrameInput> inputs;
    for (const auto& [frame, boxes] : detections) {
        FrameInput input;
        input.frame_index = frame;
        input.detections = boxes;
        const auto frame_embeddings = by_frame.find(frame);
        const std::size_t available =
            frame_embeddings == by_frame.end() ? 0 : frame_embeddings->second.size();
        if (available != boxes.size()) {
            throw ValidationError("combine_inputs: frame " + std::to_string(frame) + " has " +
                                  std::to_string(boxes.size()) + " detections but " +
                                  std::to_string(available) + " embeddings");
        }
        for (std::uint32_t d = 0; d < boxes.size(); ++d) {
            const auto record = frame_embeddings->second.find(d);
            if (record == frame_embeddings->second.end()) {
                throw ValidationError("combine_inputs: frame " + std::to_string(frame) +
                                      " missing embedding for detection " + std::to_string(d));
            }
            input.embeddings.push_back(record->second->values);
        }
        inputs.push_back(std::move(input));
        by_frame.erase(frame);
    }
    if (!by_frame.empty()) {
        throw ValidationError("combine_inputs: embeddings reference frame " +
                              std::to_string(by_frame.begin()->first) +
                              " with no detections");
    }
    return inputs;
}

std::vector<TrackRecord> read_track_records(const std::filesystem::path& path) {
    std::vector<TrackRecord> records;
    for (const CsvRow& row : read_rows(path)) {
        records.push_back(TrackRecord{row.frame, row.id, row.box, row.conf});
    }
    return records;
}

void write_results(const std::filesystem::path& path, std::span<const TrackRecord> records) {
    std::vector<TrackRecord> sorted(records.begin(), records.end());
    std::sort(sorted.begin(), sorted.end(), [](const TrackRecord& a, const TrackRecord& b) {
        return std::tie(a.frame, a.id) < std::tie(b.frame, b.id);
    });
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    for (const TrackRecord& record : sorted) {
        write_line(out, record.frame, record.id, record.box, record.conf);
    }
}

SequenceMeta read_meta(const std::filesystem::path& path) {
    const Config config = Config::from_file(path);
    SequenceMeta meta;
    meta.name = config.get_string("name", meta.name);
    meta.fps = config.get_real("fps", meta.fps);
    meta.frame_count = config.get_int("frame_count", meta.frame_count);
    meta.image_w = config.get_real("image_w", meta.image_w);
    meta.image_h = config.get_real("image_h", meta.image_h);
    meta.embedding_dim = static_cast<int>(config.get_int("embedding_dim", meta.embedding_dim));
    if (meta.fps <= 0.0) throw ValidationError(path.string() + ": fps must be positive");
    return meta;
}

void write_meta(const std::filesystem::path& path, const SequenceMeta& meta) {
    char buffer[64];
    Config config;
    config.set("name", meta.name);
    std::snprintf(buffer, sizeof(buffer), "%.6f", meta.fps);
    config.set("fps", buffer);
    config.set("frame_count", std::to_string(meta.frame_count));
    std::snprintf(buffer, sizeof(buffer), "%.6f", meta.image_w);
    config.set("image_w", buffer);
    std::snprintf(buffer, sizeof(buffer), "%.6f", meta.image_h);
    config.set("image_h", buffer);
    config.set("embedding_dim", std::to_string(meta.embedding_dim));

    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    out << config.serialize();
}

void write_bundle(const std::filesystem::path& dir, const ScenarioBundle& bundle,
                  const SequenceMeta& meta) {
    std::filesystem::create_directories(dir);

    DetectionMap detections;
    std::vector<EmbeddingRecord> embeddings;
    std::ofstream provenance(dir / "provenance.txt");
    if (!provenance) {
        throw ValidationError("cannot write file: " + (dir / "provenance.txt").string());
    }
    for (std::size_t f = 0; f < bundle.frames.size(); ++f) {
        const FrameInput& frame = bundle.frames[f];
        detections[frame.frame_index] = frame.detections;
        for (std::size_t d = 0; d < frame.embeddings.size(); ++d) {
            EmbeddingRecord record;
            record.frame = static_cast<std::uint32_t>(frame.frame_index);
            record.det_index = static_cast<std::uint32_t>(d);
            record.values = frame.embeddings[d];
            embeddings.push_back(std::move(record));
            const std::int64_t source =
                f < bundle.provenance.size() && d < bundle.provenance[f].size()
                    ? bundle.provenance[f][d]
                    : -1;
            provenance << frame.frame_index << ',' << d << ',' << source << '\n';
        }
    }

    write_detections(dir / "det.txt", detections);
    write_results(dir / "gt.txt", bundle.gt);
    write_embeddings(dir / "embeddings.tcbe", meta.embedding_dim, embeddings);
    write_meta(dir / "meta.txt", meta);
}

ScenarioBundle read_bundle(const std::filesystem::path& dir) {
    const DetectionMap detections = read_detections(dir / "det.txt");
    const EmbeddingFile embeddings = read_embeddings(dir / "embeddings.tcbe");

    ScenarioBundle bundle;
    bundle.gt = read_track_records(dir / "gt.txt");
    bundle.frames = combine_inputs(detections, embeddings);

    // provenance is optional on disk; absent entries mean unknown source
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> sources;
    const std::filesystem::path provenance_path = dir / "provenance.txt";
    if (std::filesystem::exists(provenance_path)) {
        std::ifstream in(provenance_path);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const std::vector<std::string> fields = split_fields(line);
            const std::string context = provenance_path.string() + ":" + std::to_string(line_no);
            if (fields.size() != 3) {
                throw ValidationError(context + ": expected frame,det_index,source");
            }
            sources[{parse_int(fields[0], context), parse_int(fields[1], context)}] =
                parse_int(fields[2], context);
        }
    }
    for (const FrameInput& frame : bundle.frames) {
        std::vector<std::int64_t> frame_sources;
        for (std::size_t d = 0; d < frame.detections.size(); ++d) {
            const auto it = sources.find({frame.frame_index, static_cast<std::int64_t>(d)});
            frame_sources.push_back(it == sources.end() ? -1 : it->second);
        }
        bundle.provenance.push_back(std::move(frame_sources));
    }
    return bundle;
}

}  // namespace tcb
