#include <bit>
#include <cstring>
#include <fstream>

#include <fmt/format.h>

#include "gesera/index.hpp"

namespace gesera {

namespace {

constexpr char kMagic[8] = {'G', 'E', 'S', 'E', 'R', 'A', 'I', 'X'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  void put(std::uint64_t v, int bytes) {
    char buf[8];
    for (int i = 0; i < bytes; ++i) {
      buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    }
    out_.write(buf, bytes);
  }

  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    std::string s(u32(), '\0');
    read(s.data(), s.size());
    return s;
  }
  void read(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw Error(fmt::format("index file {} is truncated", source_));
    }
  }

 private:
  std::uint64_t get(int bytes) {
    unsigned char buf[8];
    read(reinterpret_cast<char*>(buf), static_cast<std::size_t>(bytes));
    std::uint64_t v = 0;
    for (int i = bytes - 1; i >= 0; --i) {
      v = (v << 8) | buf[i];
    }
    return v;
  }

  std::istream& in_;
  std::string source_;
};

}  // namespace

struct IndexSerializer {
  static void save(const InvertedIndex& index, std::ostream& out) {
    Writer w(out);
    out.write(kMagic, sizeof kMagic);
    w.u32(InvertedIndex::kFormatVersion);
    w.f64(index.params_.k1);
    w.f64(index.params_.b);
    for (double boost : index.params_.boosts) {
      w.f64(boost);
    }
    w.u64(index.doc_ids_.size());
    for (std::size_t d = 0; d < index.doc_ids_.size(); ++d) {
      w.str(index.doc_ids_[d]);
      for (auto len : index.field_lengths_[d]) {
        w.u32(len);
      }
    }
    w.u64(index.terms_.size());
    for (std::size_t t = 0; t < index.terms_.size(); ++t) {
      w.str(index.terms_[t]);
      const auto& list = index.postings_[t];
      w.u64(list.size());
      for (const auto& p : list) {
        w.u32(p.doc);
        for (auto tf : p.tf) {
          w.u32(tf);
        }
      }
    }
  }

  static InvertedIndex load(std::istream& in, const std::string& source) {
    Reader r(in, source);
    char magic[sizeof kMagic];
    r.read(magic, sizeof magic);
    if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
      throw Error(fmt::format("{} is not a gesera index file", source));
    }
    const auto version = r.u32();
    if (version != InvertedIndex::kFormatVersion) {
      throw Error(fmt::format("index file {} has format version {}, this build reads version {}",
                              source, version, InvertedIndex::kFormatVersion));
    }
    InvertedIndex index;
    index.params_.k1 = r.f64();
    index.params_.b = r.f64();
    for (double& boost : index.params_.boosts) {
      boost = r.f64();
    }
    index.params_.validate();

    const auto n_docs = r.u64();
    std::array<double, kFieldCount> totals{};
    for (std::uint64_t d = 0; d < n_docs; ++d) {
      index.doc_ids_.push_back(r.str());
      std::array<std::uint32_t, kFieldCount> lengths{};
      for (std::size_t f = 0; f < kFieldCount; ++f) {
        lengths[f] = r.u32();
        totals[f] += lengths[f];
      }
      index.field_lengths_.push_back(lengths);
    }
    if (n_docs == 0) {
      throw Error(fmt::format("index file {} holds no documents", source));
    }
    for (std::size_t f = 0; f < kFieldCount; ++f) {
      index.average_lengths_[f] = totals[f] / static_cast<double>(n_docs);
    }

    const auto n_terms = r.u64();
    for (std::uint64_t t = 0; t < n_terms; ++t) {
      index.terms_.push_back(r.str());
      const auto count = r.u64();
      std::vector<Posting> list;
      list.reserve(count);
      for (std::uint64_t i = 0; i < count; ++i) {
        Posting p;
        p.doc = r.u32();
        for (auto& tf : p.tf) {
          tf = r.u32();
        }
        if (p.doc >= n_docs) {
          throw Error(fmt::format("index file {} is corrupt: posting for doc {} of {}", source,
                                  p.doc, n_docs));
        }
        list.push_back(p);
      }
      index.postings_.push_back(std::move(list));
    }
    return index;
  }
};

void InvertedIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(fmt::format("cannot write index file {}", path.string()));
  }
  IndexSerializer::save(*this, out);
  if (!out) {
    throw Error(fmt::format("failed writing index file {}", path.string()));
  }
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(fmt::format("cannot open index file {}", path.string()));
  }
  return IndexSerializer::load(in, path.string());
}

}  // namespace gesera
