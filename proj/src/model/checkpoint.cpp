#include "wattspell/model/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <string_view>

#include "wattspell/core/error.hpp"

namespace wspl {

namespace {

constexpr char kMagic[4] = {'W', 'S', 'P', 'L'};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  void raw(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
  const std::vector<char>& bytes() const { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class Reader {
 public:
  explicit Reader(std::vector<char> bytes) : bytes_(std::move(bytes)) {}

  bool at_end() const { return pos_ == bytes_.size(); }

  std::string raw(std::size_t n, const char* what) {
    need(n, what);
    std::string s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) throw CheckpointTruncatedError(std::string("checkpoint truncated while reading ") + what);
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64(const char* what) { return std::bit_cast<double>(u64(what)); }
  std::string str(const char* what) {
    return raw(u32(what), what);
  }

 private:
  std::vector<char> bytes_;
  std::size_t pos_ = 0;
};

void check_fits(const ModelParams& params, const ModelConfig& config) {
  const ModelParams expected = ModelParams::zeros(config);
  std::vector<std::pair<std::string, Shape>> want;
  expected.for_each([&](const std::string& name, const TensorD& t) { want.emplace_back(name, t.shape()); });
  std::size_t i = 0;
  params.for_each([&](const std::string& name, const TensorD& t) {
    if (i >= want.size() || want[i].first != name) {
      throw CheckpointShapeError("checkpoint block " + name + " is not part of the expected model");
    }
    if (want[i].second != t.shape()) {
      throw CheckpointShapeError("checkpoint block " + name + " has shape " + shape_string(t.shape()) + ", config expects " +
                                 shape_string(want[i].second));
    }
    ++i;
  });
  if (i != want.size()) throw CheckpointShapeError("checkpoint lacks block " + want[i].first);
}

}  // namespace

void checkpoint_save(const ModelParams& params, const ModelConfig& config, const std::filesystem::path& path) {
  check_fits(params, config);
  Writer w;
  w.raw(kMagic, 4);
  w.u32(kCheckpointVersion);
  w.str(canonical_text(config));
  params.for_each([&](const std::string& name, const TensorD& t) {
    w.str(name);
    w.u32(static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) w.u64(d);
    for (double v : t.values()) w.f64(v);
  });
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open checkpoint for writing: " + path.string());
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw Error("failed writing checkpoint: " + path.string());
}

Checkpoint checkpoint_load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint: " + path.string());
  Reader r(std::vector<char>(std::istreambuf_iterator<char>(in), {}));

  if (r.raw(4, "magic") != std::string_view(kMagic, 4)) throw CheckpointFormatError("not a checkpoint file (bad magic)");
  const std::uint32_t version = r.u32("version");
  if (version != kCheckpointVersion) {
    throw CheckpointVersionError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                                 std::to_string(kCheckpointVersion) + ")");
  }
  const std::string text = r.str("config");
  ModelConfig config;
  try {
    config = model_config_from_json(nlohmann::json::parse(text));
    config.validate();
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointFormatError(std::string("checkpoint config is not valid JSON: ") + e.what());
  } catch (const DomainError& e) {
    throw CheckpointFormatError(std::string("checkpoint config rejected: ") + e.what());
  }

  ModelParams params = ModelParams::zeros(config);
  params.for_each([&](const std::string& name, TensorD& t) {
    if (r.at_end()) throw CheckpointTruncatedError("checkpoint ends before block " + name);
    const std::string stored = r.str("block name");
    if (stored != name) throw CheckpointFormatError("checkpoint block '" + stored + "' found where '" + name + "' was expected");
    const std::uint32_t rank = r.u32("block rank");
    if (rank == 0 || rank > 8) throw CheckpointFormatError("checkpoint block " + name + " has invalid rank " + std::to_string(rank));
    Shape shape(rank);
    for (auto& d : shape) d = r.u64("block dims");
    if (shape != t.shape()) {
      throw CheckpointShapeError("checkpoint block " + name + " has shape " + shape_string(shape) + ", config expects " +
                                 shape_string(t.shape()));
    }
    r.need(t.size() * 8, "block data");
    for (auto& v : t.values()) v = r.f64("block data");
  });
  if (!r.at_end()) throw CheckpointFormatError("trailing bytes after the last checkpoint block");
  return {std::move(params), config};
}

Checkpoint checkpoint_load(const std::filesystem::path& path, const ModelConfig& expected) {
  Checkpoint ck = checkpoint_load(path);
  check_fits(ck.params, expected);
  return ck;
}

}  // namespace wspl
