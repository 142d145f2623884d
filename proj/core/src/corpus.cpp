#include "scarwid/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scarwid/common.hpp"

namespace scarwid {

using nlohmann::json;

const char* to_string(Label label) {
    return label == Label::infected ? "infected" : "uninfected";
}

const char* to_string(Source source) {
    switch (source) {
        case Source::real: return "real";
        case Source::synthetic: return "synthetic";
        case Source::toy: return "toy";
    }
    return "real";
}

Label label_from_string(const std::string& s) {
    if (s == "infected") return Label::infected;
    if (s == "uninfected") return Label::uninfected;
    throw Error("unknown label string: \"" + s + "\"");
}

Source source_from_string(const std::string& s) {
    if (s == "real") return Source::real;
    if (s == "synthetic") return Source::synthetic;
    if (s == "toy") return Source::toy;
    throw Error("unknown source string: \"" + s + "\"");
}

void Dataset::rebuild_index() {
    subjects.clear();
    std::set<std::string> ids;
    for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
        const Sample& s = samples[i];
        if (!ids.insert(s.id).second)
            throw Error("duplicate sample id: \"" + s.id + "\"");
        subjects[s.subject_id].push_back(i);
    }
}

std::vector<std::string> Dataset::subject_ids() const {
    std::vector<std::string> out;
    out.reserve(subjects.size());
    for (const auto& [sid, _] : subjects) out.push_back(sid);
    return out;
}

Image load_sample_image(const Sample& sample, int target_size) {
    Image img;
    if (sample.image) {
        img = *sample.image;
    } else if (!sample.image_path.empty()) {
        img = read_png(sample.image_path);
    } else {
        throw Error("sample \"" + sample.id + "\" has no image data or path");
    }
    if (img.height != target_size || img.width != target_size)
        img = resize_bilinear(img, target_size, target_size);
    return img;
}

std::string dataset_hash(const Dataset& ds) {
    Fnv1a h;
    h.update_u64(ds.samples.size());
    h.update_u64(static_cast<std::uint64_t>(ds.image_size));
    for (const Sample& s : ds.samples) {
        h.update(s.id).update(s.subject_id);
        h.update(s.caption ? *s.caption : std::string("\x01"));
        h.update(to_string(s.label)).update(to_string(s.source));
        if (s.image) {
            h.update_u64(image_hash(*s.image));
        } else {
            h.update(s.image_path);
        }
    }
    return h.hex();
}

void SplitSpec::validate() const {
    if (train <= 0 || val <= 0 || test <= 0)
        throw Error("split fractions must be positive");
    if (std::abs(train + val + test - 1.0) > 1e-9)
        throw Error("split fractions must sum to 1");
    if (folds < 2) throw Error("folds must be >= 2");
}

Dataset load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("manifest not found: " + path.string());
    const auto base = path.parent_path();

    Dataset ds;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw Error("manifest " + path.string() + " line " + std::to_string(lineno) +
                        ": malformed record: " + e.what());
        }
        try {
            Sample s;
            s.id = j.at("id").get<std::string>();
            s.subject_id = j.at("subject_id").get<std::string>();
            s.label = label_from_string(j.at("label").get<std::string>());
            if (j.contains("caption") && !j.at("caption").is_null())
                s.caption = j.at("caption").get<std::string>();
            s.source = source_from_string(j.value("source", "real"));
            auto rel = j.at("image_path").get<std::string>();
            s.image_path = (base / rel).string();
            ds.samples.push_back(std::move(s));
        } catch (const json::exception& e) {
            throw Error("manifest " + path.string() + " line " + std::to_string(lineno) +
                        ": " + e.what());
        }
    }
    ds.rebuild_index();
    return ds;
}

void write_manifest(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write manifest: " + path.string());
    const auto base = path.parent_path();
    for (const Sample& s : ds.samples) {
        json j;
        j["id"] = s.id;
        j["subject_id"] = s.subject_id;
        j["image_path"] = std::filesystem::relative(s.image_path, base).generic_string();
        j["label"] = to_string(s.label);
        j["caption"] = s.caption ? json(*s.caption) : json(nullptr);
        j["source"] = to_string(s.source);
        out << j.dump() << "\n";
    }
}

namespace {

Dataset subset(const Dataset& ds, const std::vector<int>& indices) {
    Dataset out;
    out.image_size = ds.image_size;
    out.samples.reserve(indices.size());
    for (int i : indices) out.samples.push_back(ds.samples[i]);
    out.rebuild_index();
    return out;
}

}  // namespace

Splits subject_wise_split(const Dataset& ds, const SplitSpec& spec) {
    spec.validate();
    if (ds.subjects.size() < 3)
        throw Error("subject_wise_split: need at least 3 subjects");

    std::vector<std::string> subs = ds.subject_ids();
    Rng rng(mix_seed(spec.seed, 0xA11CE5));
    rng.shuffle(subs);

    const double total = static_cast<double>(ds.samples.size());
    const double targets[3] = {spec.train * total, spec.val * total, spec.test * total};
    double counts[3] = {0, 0, 0};
    std::vector<int> part_indices[3];

    // Greedy: each subject goes whole to the partition with the largest
    // remaining deficit (ties resolved train > val > test).
    for (const std::string& sid : subs) {
        const auto& members = ds.subjects.at(sid);
        int best = 0;
        double best_deficit = targets[0] - counts[0];
        for (int p = 1; p < 3; ++p) {
            double d = targets[p] - counts[p];
            if (d > best_deficit) {
                best = p;
                best_deficit = d;
            }
        }
        counts[best] += static_cast<double>(members.size());
        for (int i : members) part_indices[best].push_back(i);
    }
    for (auto& part : part_indices) std::sort(part.begin(), part.end());

    Splits out{subset(ds, part_indices[0]), subset(ds, part_indices[1]),
               subset(ds, part_indices[2])};
    if (out.train.empty() || out.val.empty() || out.test.empty())
        throw Error("subject_wise_split: a partition came out empty; need more subjects");
    return out;
}

std::vector<FoldSplit> make_subject_folds(const Dataset& ds, const SplitSpec& spec) {
    spec.validate();
    if (static_cast<int>(ds.subjects.size()) < spec.folds)
        throw Error("make_subject_folds: " + std::to_string(ds.subjects.size()) +
                    " subjects is fewer than " + std::to_string(spec.folds) + " folds");

    std::vector<std::string> subs = ds.subject_ids();
    Rng rng(mix_seed(spec.seed, 0xF01D5));
    rng.shuffle(subs);

    // Balance fold test sets by sample count.
    std::vector<std::vector<std::string>> fold_subjects(spec.folds);
    std::vector<std::size_t> fold_counts(spec.folds, 0);
    for (const std::string& sid : subs) {
        int best = 0;
        for (int f = 1; f < spec.folds; ++f)
            if (fold_counts[f] < fold_counts[best]) best = f;
        fold_subjects[best].push_back(sid);
        fold_counts[best] += ds.subjects.at(sid).size();
    }

    std::vector<FoldSplit> folds;
    const double val_share = spec.val / (spec.train + spec.val);
    for (int f = 0; f < spec.folds; ++f) {
        std::set<std::string> test_set(fold_subjects[f].begin(), fold_subjects[f].end());
        std::vector<int> test_idx;
        std::vector<std::string> rest;
        for (const auto& [sid, members] : ds.subjects) {
            if (test_set.count(sid)) {
                test_idx.insert(test_idx.end(), members.begin(), members.end());
            } else {
                rest.push_back(sid);
            }
        }
        // Carve validation subjects out of the remainder, per fold.
        Rng vr(mix_seed(spec.seed, 0x7A1, static_cast<std::uint64_t>(f)));
        vr.shuffle(rest);
        std::size_t rest_samples = 0;
        for (const auto& sid : rest) rest_samples += ds.subjects.at(sid).size();
        const double val_target = val_share * static_cast<double>(rest_samples);

        std::vector<int> train_idx, val_idx;
        double val_count = 0;
        for (const std::string& sid : rest) {
            const auto& members = ds.subjects.at(sid);
            if (val_count < val_target) {
                val_idx.insert(val_idx.end(), members.begin(), members.end());
                val_count += static_cast<double>(members.size());
            } else {
                train_idx.insert(train_idx.end(), members.begin(), members.end());
            }
        }
        std::sort(test_idx.begin(), test_idx.end());
        std::sort(train_idx.begin(), train_idx.end());
        std::sort(val_idx.begin(), val_idx.end());
        folds.push_back({f, subset(ds, train_idx), subset(ds, val_idx), subset(ds, test_idx)});
    }
    return folds;
}

Dataset sample_support_set(const Dataset& train, int size, std::uint64_t seed, bool strict) {
    if (size < 1) throw Error("sample_support_set: size must be >= 1");
    const int n_subjects = static_cast<int>(train.subjects.size());
    if (n_subjects == 0) throw Error("sample_support_set: empty dataset");
    if (size > n_subjects) {
        if (strict)
            throw Error("sample_support_set: requested " + std::to_string(size) +
                        " but only " + std::to_string(n_subjects) + " subjects exist");
        std::cerr << "[scarwid] support set capped at " << n_subjects
                  << " subjects (requested " << size << ")\n";
    }

    std::vector<std::string> subs = train.subject_ids();
    Rng rng(mix_seed(seed, 0x5B9F0));
    rng.shuffle(subs);

    const int take = std::min(size, n_subjects);
    std::vector<int> chosen;
    chosen.reserve(take);
    for (int i = 0; i < take; ++i) {
        const auto& members = train.subjects.at(subs[i]);
        chosen.push_back(members[rng.uniform_index(members.size())]);
    }
    std::sort(chosen.begin(), chosen.end());
    return subset(train, chosen);
}

AugmentOp AugmentOp::parse(const std::string& name, double amount) {
    AugmentOp op;
    op.amount = amount;
    if (name == "crop") op.kind = Kind::crop;
    else if (name == "hflip") op.kind = Kind::hflip;
    else if (name == "vflip") op.kind = Kind::vflip;
    else if (name == "rotate") op.kind = Kind::rotate;
    else if (name == "brightness") op.kind = Kind::brightness;
    else if (name == "contrast") op.kind = Kind::contrast;
    else if (name == "saturation") op.kind = Kind::saturation;
    else throw Error("unknown augmentation op: \"" + name + "\"");
    return op;
}

namespace {

Image flip_h(const Image& src) {
    Image dst(src.height, src.width);
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x)
            for (int c = 0; c < 3; ++c) dst.at(y, x, c) = src.at(y, src.width - 1 - x, c);
    return dst;
}

Image flip_v(const Image& src) {
    Image dst(src.height, src.width);
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x)
            for (int c = 0; c < 3; ++c) dst.at(y, x, c) = src.at(src.height - 1 - y, x, c);
    return dst;
}

Image rotate_deg(const Image& src, double degrees) {
    double rad = degrees * M_PI / 180.0;
    if (std::fmod(degrees, 360.0) == 0.0) return src;
    Image dst(src.height, src.width);
    const double cy = (src.height - 1) / 2.0;
    const double cx = (src.width - 1) / 2.0;
    const double cosr = std::cos(rad), sinr = std::sin(rad);
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            // inverse map, edge clamp
            double dy = y - cy, dx = x - cx;
            double sxf = cx + dx * cosr + dy * sinr;
            double syf = cy - dx * sinr + dy * cosr;
            int x0 = static_cast<int>(std::floor(sxf));
            int y0 = static_cast<int>(std::floor(syf));
            double wx = sxf - x0, wy = syf - y0;
            int x0c = std::clamp(x0, 0, src.width - 1), x1c = std::clamp(x0 + 1, 0, src.width - 1);
            int y0c = std::clamp(y0, 0, src.height - 1), y1c = std::clamp(y0 + 1, 0, src.height - 1);
            for (int c = 0; c < 3; ++c) {
                double v = (1 - wy) * ((1 - wx) * src.at(y0c, x0c, c) + wx * src.at(y0c, x1c, c)) +
                           wy * ((1 - wx) * src.at(y1c, x0c, c) + wx * src.at(y1c, x1c, c));
                dst.at(y, x, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
            }
        }
    }
    return dst;
}

Image random_crop(const Image& src, double fraction, Rng& rng) {
    if (fraction <= 0.0 || fraction > 1.0)
        throw Error("crop fraction must be in (0, 1], got " + std::to_string(fraction));
    int ch = std::max(1, static_cast<int>(std::lround(src.height * fraction)));
    int cw = std::max(1, static_cast<int>(std::lround(src.width * fraction)));
    if (ch > src.height || cw > src.width)
        throw Error("crop larger than image");
    int oy = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(src.height - ch + 1)));
    int ox = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(src.width - cw + 1)));
    Image crop(ch, cw);
    for (int y = 0; y < ch; ++y)
        for (int x = 0; x < cw; ++x)
            for (int c = 0; c < 3; ++c) crop.at(y, x, c) = src.at(oy + y, ox + x, c);
    return resize_bilinear(crop, src.height, src.width);
}

}  // namespace

Image augment_image(const Image& img, const std::vector<AugmentOp>& ops, std::uint64_t seed) {
    if (img.empty()) throw Error("augment_image: empty image");
    Rng rng(mix_seed(seed, 0xAC6));
    Image out = img;
    for (const AugmentOp& op : ops) {
        switch (op.kind) {
            case AugmentOp::Kind::crop:
                out = random_crop(out, op.amount, rng);
                break;
            case AugmentOp::Kind::hflip:
                out = flip_h(out);
                break;
            case AugmentOp::Kind::vflip:
                out = flip_v(out);
                break;
            case AugmentOp::Kind::rotate:
                out = rotate_deg(out, op.amount);
                break;
            case AugmentOp::Kind::brightness:
                for (float& v : out.data) v = static_cast<float>(v + op.amount);
                clamp01(out);
                break;
            case AugmentOp::Kind::contrast:
                for (float& v : out.data) v = static_cast<float>((v - 0.5) * op.amount + 0.5);
                clamp01(out);
                break;
            case AugmentOp::Kind::saturation: {
                for (int y = 0; y < out.height; ++y)
                    for (int x = 0; x < out.width; ++x) {
                        float g = 0.299f * out.at(y, x, 0) + 0.587f * out.at(y, x, 1) +
                                  0.114f * out.at(y, x, 2);
                        for (int c = 0; c < 3; ++c)
                            out.at(y, x, c) =
                                static_cast<float>(g + (out.at(y, x, c) - g) * op.amount);
                    }
                clamp01(out);
                break;
            }
        }
    }
    return out;
}

IngestResult ingest_synthetic(const std::filesystem::path& dir, Label label, int image_size) {
    if (!std::filesystem::is_directory(dir))
        throw Error("ingest_synthetic: not a directory: " + dir.string());

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("ingest_synthetic: empty directory: " + dir.string());

    IngestResult result;
    result.dataset.image_size = image_size;
    for (const auto& f : files) {
        Image img;
        try {
            img = read_png(f);
        } catch (const Error& e) {
            std::cerr << "[scarwid] skipping undecodable file " << f << ": " << e.what() << "\n";
            ++result.skipped;
            continue;
        }
        std::string stem = f.stem().string();
        Sample s;
        s.id = "syn_" + stem;
        s.subject_id = "syn_subject_" + stem;
        s.label = label;
        s.source = Source::synthetic;
        s.image_path = f.string();
        result.dataset.samples.push_back(std::move(s));
    }
    if (result.dataset.samples.empty())
        throw Error("ingest_synthetic: no decodable images in " + dir.string());
    result.dataset.rebuild_index();
    return result;
}

void ToyAttrConfig::validate() const {
    auto chk = [](double p, const char* name) {
        if (p < 0.0 || p > 1.0) throw Error(std::string("toy config: ") + name + " must be in [0,1]");
    };
    chk(p_ring, "p_ring");
    chk(p_discharge, "p_discharge");
    chk(p_necrosis, "p_necrosis");
    chk(p_granulation, "p_granulation");
    chk(text_only_signal_rate, "text_only_signal_rate");
    chk(image_only_signal_rate, "image_only_signal_rate");
    chk(label_noise, "label_noise");
    if (text_only_signal_rate + image_only_signal_rate > 1.0)
        throw Error("toy config: signal rates sum above 1");
    if (image_size < 16) throw Error("toy config: image_size must be >= 16");
    if (samples_per_subject < 1) throw Error("toy config: samples_per_subject must be >= 1");
}

namespace {

struct Rgb {
    float r, g, b;
};

void fill_ellipse(Image& img, double cy, double cx, double ry, double rx, Rgb color,
                  PixelBox* box = nullptr) {
    int y0 = std::max(0, static_cast<int>(std::floor(cy - ry)));
    int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(cy + ry)));
    int x0 = std::max(0, static_cast<int>(std::floor(cx - rx)));
    int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(cx + rx)));
    PixelBox b{img.width, img.height, 0, 0};
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            double dy = (y - cy) / ry, dx = (x - cx) / rx;
            if (dy * dy + dx * dx <= 1.0) {
                img.at(y, x, 0) = color.r;
                img.at(y, x, 1) = color.g;
                img.at(y, x, 2) = color.b;
                b.x0 = std::min(b.x0, x);
                b.y0 = std::min(b.y0, y);
                b.x1 = std::max(b.x1, x + 1);
                b.y1 = std::max(b.y1, y + 1);
            }
        }
    if (box && b.x1 > b.x0) *box = b;
}

void fill_ring(Image& img, double cy, double cx, double r_in, double r_out, Rgb color) {
    int y0 = std::max(0, static_cast<int>(std::floor(cy - r_out)));
    int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(cy + r_out)));
    int x0 = std::max(0, static_cast<int>(std::floor(cx - r_out)));
    int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(cx + r_out)));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            double d = std::sqrt((y - cy) * (y - cy) + (x - cx) * (x - cx));
            if (d >= r_in && d <= r_out) {
                img.at(y, x, 0) = color.r;
                img.at(y, x, 1) = color.g;
                img.at(y, x, 2) = color.b;
            }
        }
}

Rgb jitter(Rng& rng, float r, float g, float b, float amp = 0.04f) {
    auto j = [&](float v) {
        return std::clamp(v + static_cast<float>(rng.uniform(-amp, amp)), 0.0f, 1.0f);
    };
    return {j(r), j(g), j(b)};
}

}  // namespace

std::string toy_caption(bool ring, bool discharge, bool necrosis, bool granulation) {
    std::vector<std::string> phrases;
    if (ring) phrases.push_back("surrounding erythema");
    if (granulation) phrases.push_back("pink granulation tissue");
    if (discharge) phrases.push_back("yellowish discharge");
    if (necrosis) phrases.push_back("black necrotic tissue");

    std::string text = "a shallow wound";
    if (phrases.empty()) return text + " with a clean bed";
    text += " with ";
    for (std::size_t i = 0; i < phrases.size(); ++i) {
        if (i > 0) text += (i + 1 == phrases.size()) ? " and " : " , ";
        text += phrases[i];
    }
    return text;
}

ToyCorpus generate_toy_corpus(int n, const ToyAttrConfig& cfg, std::uint64_t seed) {
    if (n < 1) throw Error("generate_toy_corpus: n must be >= 1");
    cfg.validate();

    ToyCorpus corpus;
    corpus.dataset.image_size = cfg.image_size;
    corpus.dataset.samples.reserve(n);
    corpus.records.reserve(n);

    const int S = cfg.image_size;
    for (int i = 0; i < n; ++i) {
        Rng rng(mix_seed(seed, 0x70Eu, static_cast<std::uint64_t>(i)));

        ToySampleRecord rec;
        rec.ring = rng.bernoulli(cfg.p_ring);
        rec.discharge = rng.bernoulli(cfg.p_discharge);
        rec.necrosis = rng.bernoulli(cfg.p_necrosis);
        rec.granulation = rng.bernoulli(cfg.p_granulation);

        double u = rng.uniform();
        if (u < cfg.text_only_signal_rate) rec.channel = SignalChannel::text_only;
        else if (u < cfg.text_only_signal_rate + cfg.image_only_signal_rate)
            rec.channel = SignalChannel::image_only;
        else rec.channel = SignalChannel::both;

        bool infected = rec.discharge || rec.necrosis;
        rec.label_flipped = rng.bernoulli(cfg.label_noise);
        rec.label = (infected != rec.label_flipped) ? Label::infected : Label::uninfected;

        const bool render_deciding = rec.channel != SignalChannel::text_only;
        const bool caption_deciding = rec.channel != SignalChannel::image_only;

        Image img(S, S);
        Rgb skin = jitter(rng, 0.82f, 0.67f, 0.55f);
        for (int y = 0; y < S; ++y)
            for (int x = 0; x < S; ++x) {
                img.at(y, x, 0) = skin.r;
                img.at(y, x, 1) = skin.g;
                img.at(y, x, 2) = skin.b;
            }

        double cy = S * rng.uniform(0.42, 0.58);
        double cx = S * rng.uniform(0.42, 0.58);
        double ry = S * rng.uniform(0.22, 0.30);
        double rx = S * rng.uniform(0.22, 0.30);

        if (rec.ring)
            fill_ring(img, cy, cx, std::max(ry, rx) * 1.05, std::max(ry, rx) * 1.35,
                      jitter(rng, 0.86f, 0.24f, 0.20f));

        fill_ellipse(img, cy, cx, ry, rx, jitter(rng, 0.59f, 0.27f, 0.23f));

        if (rec.granulation) {
            Rgb pink = jitter(rng, 0.94f, 0.47f, 0.59f, 0.02f);
            for (int y = 0; y < S; y += 3)
                for (int x = 0; x < S; x += 3) {
                    double dy = (y - cy) / (ry * 0.8), dx = (x - cx) / (rx * 0.8);
                    if (dy * dy + dx * dx <= 1.0) {
                        img.at(y, x, 0) = pink.r;
                        img.at(y, x, 1) = pink.g;
                        img.at(y, x, 2) = pink.b;
                    }
                }
        }

        if (rec.discharge && render_deciding) {
            double br = S * rng.uniform(0.10, 0.14);
            double oy = cy + ry * rng.uniform(-0.35, 0.35);
            double ox = cx + rx * rng.uniform(-0.35, 0.35);
            fill_ellipse(img, oy, ox, br, br * rng.uniform(0.8, 1.2),
                         jitter(rng, 0.92f, 0.86f, 0.33f, 0.02f), &rec.discharge_box);
        }
        if (rec.necrosis && render_deciding) {
            double br = S * rng.uniform(0.09, 0.13);
            double oy = cy - ry * rng.uniform(0.1, 0.4);
            double ox = cx - rx * rng.uniform(0.1, 0.4);
            fill_ellipse(img, oy, ox, br, br * rng.uniform(0.8, 1.2),
                         jitter(rng, 0.10f, 0.08f, 0.07f, 0.02f), &rec.necrosis_box);
        }
        quantize_u8(img);

        Sample s;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "toy_%05d", i);
        s.id = buf;
        std::snprintf(buf, sizeof(buf), "toy_subject_%05d", i / cfg.samples_per_subject);
        s.subject_id = buf;
        s.caption = toy_caption(rec.ring, rec.discharge && caption_deciding,
                                rec.necrosis && caption_deciding, rec.granulation);
        s.label = rec.label;
        s.source = Source::toy;
        s.image = std::make_shared<Image>(std::move(img));

        if (rec.channel == SignalChannel::text_only) ++corpus.text_only_count;
        if (rec.channel == SignalChannel::image_only) ++corpus.image_only_count;
        if (s.label == Label::infected) ++corpus.infected_count;

        corpus.dataset.samples.push_back(std::move(s));
        corpus.records.push_back(rec);
    }
    corpus.dataset.rebuild_index();
    return corpus;
}

}  // namespace scarwid
