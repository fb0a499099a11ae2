// Binary index layout, all integers little-endian:
//
//   magic      8 bytes  "BEGEIDX1"
//   version    u32
//   doc_count  u64
//   per doc:   str id, str title, str abstract, u32 length,
//              u32 n, u32 forward[n]   (0xFFFFFFFF = sentence break)
//   term_count u64
//   per term:  str term, u32 n, {u32 doc, u32 tf}[n]
//   crc32      u32 over every preceding byte
//
// where str = u32 byte length followed by UTF-8 bytes.

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>

#include "evgen/retrieval.hpp"

namespace evgen {
namespace {

constexpr std::array<char, 8> kMagic = {'B', 'E', 'G', 'E', 'I', 'D', 'X', '1'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void raw(const char* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  std::vector<std::uint8_t>& bytes() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

[[noreturn]] void corrupt(const std::string& why) {
  throw RetrievalError(RetrievalError::Kind::kCorruptIndex, "CorruptIndex: " + why);
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_++]} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{bytes_[pos_++]} << (8 * i);
    return v;
  }
  std::string str() {
    std::uint32_t n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  // Guards count fields against allocating more than the input could hold.
  std::size_t count(std::uint64_t n, std::size_t min_item_bytes) {
    if (n > remaining() / min_item_bytes) corrupt("count exceeds file size");
    return static_cast<std::size_t>(n);
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) {
    if (remaining() < n) corrupt("unexpected end of data");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t chunk = std::min<std::size_t>(bytes.size() - pos, 1u << 30);
    crc = crc32(crc, bytes.data() + pos, static_cast<uInt>(chunk));
    pos += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<std::uint8_t> InvertedIndex::serialize() const {
  Writer w;
  w.raw(kMagic.data(), kMagic.size());
  w.u32(kVersion);
  w.u64(doc_ids_.size());
  for (std::uint32_t d = 0; d < doc_ids_.size(); ++d) {
    w.str(doc_ids_[d]);
    w.str(titles_[d]);
    w.str(bodies_[d]);
    w.u32(doc_lengths_[d]);
    auto stream = forward(d);
    w.u32(static_cast<std::uint32_t>(stream.size()));
    for (std::uint32_t id : stream) w.u32(id);
  }
  w.u64(terms_.size());
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    w.str(terms_[t]);
    w.u32(static_cast<std::uint32_t>(postings_[t].size()));
    for (const Posting& p : postings_[t]) {
      w.u32(p.doc);
      w.u32(p.tf);
    }
  }
  auto& bytes = w.bytes();
  w.u32(crc32_of(bytes));
  return std::move(bytes);
}

InvertedIndex InvertedIndex::deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size() + 4 + 4) corrupt("file too short");
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0)
    corrupt("bad magic bytes");
  auto body = bytes.first(bytes.size() - 4);
  Reader trailer(bytes.last(4));
  if (trailer.u32() != crc32_of(body)) corrupt("checksum mismatch");

  Reader r(body.subspan(kMagic.size()));
  if (std::uint32_t version = r.u32(); version != kVersion)
    corrupt("unsupported version " + std::to_string(version));

  InvertedIndex index;
  const std::size_t docs = r.count(r.u64(), 20);
  index.doc_ids_.reserve(docs);
  for (std::size_t d = 0; d < docs; ++d) {
    index.doc_ids_.push_back(r.str());
    index.titles_.push_back(r.str());
    index.bodies_.push_back(r.str());
    index.doc_lengths_.push_back(r.u32());
    const std::size_t n = r.count(r.u32(), 4);
    std::size_t tokens = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t id = r.u32();
      if (id != kSentenceBreak) ++tokens;
      index.forward_.push_back(id);
    }
    if (tokens != index.doc_lengths_.back()) corrupt("document length mismatch");
    index.forward_offsets_.push_back(index.forward_.size());
  }

  const std::size_t terms = r.count(r.u64(), 8);
  index.terms_.reserve(terms);
  index.postings_.reserve(terms);
  for (std::size_t t = 0; t < terms; ++t) {
    std::string term = r.str();
    if (term.empty() || (!index.terms_.empty() && !(index.terms_.back() < term)))
      corrupt("term dictionary out of order");
    index.terms_.push_back(std::move(term));
    const std::size_t n = r.count(r.u32(), 8);
    auto& list = index.postings_.emplace_back();
    list.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      Posting p{r.u32(), r.u32()};
      if (p.doc >= docs || p.tf == 0 || p.tf > index.doc_lengths_[p.doc] ||
          (!list.empty() && list.back().doc >= p.doc))
        corrupt("invalid posting");
      list.push_back(p);
    }
  }
  if (r.remaining() != 0) corrupt("trailing bytes");
  for (std::uint32_t id : index.forward_)
    if (id != kSentenceBreak && id >= terms) corrupt("forward term id out of range");

  index.finalize();
  if (index.doc_lookup_.size() != index.doc_ids_.size()) corrupt("duplicate doc id");
  return index;
}

void InvertedIndex::save(const std::filesystem::path& path) const {
  const auto bytes = serialize();
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw RetrievalError(RetrievalError::Kind::kIo, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
      throw RetrievalError(RetrievalError::Kind::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw RetrievalError(RetrievalError::Kind::kIo,
                         "cannot move index into place: " + ec.message());
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RetrievalError(RetrievalError::Kind::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace evgen
