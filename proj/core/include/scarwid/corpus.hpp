#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scarwid/image.hpp"

namespace scarwid {

enum class Label { uninfected = 0, infected = 1 };
enum class Source { real, synthetic, toy };

const char* to_string(Label label);
const char* to_string(Source source);
Label label_from_string(const std::string& s);
Source source_from_string(const std::string& s);

/// One wound record. Images are either held in memory (toy/synthetic) or
/// referenced by path and loaded on demand.
struct Sample {
    std::string id;
    std::string subject_id;
    std::optional<std::string> caption;
    Label label = Label::uninfected;
    Source source = Source::real;
    std::string image_path;                 // empty when image is in memory
    std::shared_ptr<const Image> image;     // null when backed by image_path
};

struct Dataset {
    std::vector<Sample> samples;
    std::map<std::string, std::vector<int>> subjects;  // subject_id -> sample indices
    int image_size = 224;

    void rebuild_index();
    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    std::vector<std::string> subject_ids() const;
};

/// Load the sample's pixels at the dataset's configured size.
Image load_sample_image(const Sample& sample, int target_size);

/// Fingerprint over ids, subjects, labels, captions and pixel content.
std::string dataset_hash(const Dataset& ds);

struct SplitSpec {
    double train = 0.6;
    double val = 0.2;
    double test = 0.2;
    int folds = 5;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Splits {
    Dataset train;
    Dataset val;
    Dataset test;
};

struct FoldSplit {
    int fold = 0;
    Dataset train;
    Dataset val;
    Dataset test;
};

// JSON Lines manifest, one record per sample; image paths relative to the
// manifest's directory.
Dataset load_manifest(const std::filesystem::path& path);
void write_manifest(const Dataset& ds, const std::filesystem::path& path);

Splits subject_wise_split(const Dataset& ds, const SplitSpec& spec);
std::vector<FoldSplit> make_subject_folds(const Dataset& ds, const SplitSpec& spec);

/// At most one sample per subject, chosen deterministically from the seed.
/// Non-strict mode caps the size at the subject count; strict mode throws.
Dataset sample_support_set(const Dataset& train, int size, std::uint64_t seed,
                           bool strict = false);

struct AugmentOp {
    enum class Kind { crop, hflip, vflip, rotate, brightness, contrast, saturation };
    Kind kind = Kind::hflip;
    double amount = 0.0;  // crop: kept fraction; rotate: degrees;
                          // brightness: delta; contrast/saturation: factor

    static AugmentOp parse(const std::string& name, double amount);
};

Image augment_image(const Image& img, const std::vector<AugmentOp>& ops, std::uint64_t seed);

struct IngestResult {
    Dataset dataset;
    int skipped = 0;  // undecodable files
};

/// Ingest a directory of pre-generated images under one label. Each file gets
/// a fresh synthetic subject so splits never mix them with real subjects;
/// these samples are train-only by contract.
IngestResult ingest_synthetic(const std::filesystem::path& dir, Label label, int image_size);

struct ToyAttrConfig {
    int image_size = 32;
    double p_ring = 0.45;
    double p_discharge = 0.30;
    double p_necrosis = 0.25;
    double p_granulation = 0.50;
    // Fraction of samples whose deciding attribute appears only in the
    // caption (not rendered), and the complementary image-only fraction
    // (rendered but not captioned). Remaining samples carry the signal in
    // both channels.
    double text_only_signal_rate = 0.30;
    double image_only_signal_rate = 0.35;
    double label_noise = 0.0;
    int samples_per_subject = 2;

    void validate() const;
};

enum class SignalChannel { both, text_only, image_only };

struct PixelBox {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open
    bool valid() const { return x1 > x0 && y1 > y0; }
};

struct ToySampleRecord {
    bool ring = false;
    bool discharge = false;
    bool necrosis = false;
    bool granulation = false;
    SignalChannel channel = SignalChannel::both;
    bool label_flipped = false;
    Label label = Label::uninfected;
    PixelBox discharge_box;  // valid only when discharge was rendered
    PixelBox necrosis_box;   // valid only when necrosis was rendered
};

struct ToyCorpus {
    Dataset dataset;
    std::vector<ToySampleRecord> records;
    int text_only_count = 0;   // samples tagged text_only
    int image_only_count = 0;  // samples tagged image_only
    int infected_count = 0;    // post-noise infected labels
};

/// Procedural desk-scale corpus: skin background, elliptical wound bed,
/// optional erythema ring / yellow discharge / necrosis patch / granulation
/// texture. Label = infected iff discharge or necrosis (pre-noise); the
/// template caption enumerates the attributes visible to the text channel.
ToyCorpus generate_toy_corpus(int n, const ToyAttrConfig& cfg, std::uint64_t seed);

/// Template caption for a given attribute visibility set.
std::string toy_caption(bool ring, bool discharge, bool necrosis, bool granulation);

}  // namespace scarwid
