#include "codebook.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace sparrow {

namespace {

constexpr int kMaxMaterializedBits = 22;

BitString concat_payload_tag(const BitString& payload, const BitString& tag)
{
    BitString w = BitString::zeros(payload.width() + tag.width());
    for (int pos = 0; pos < payload.width(); ++pos)
        if (payload.bit(pos))
            w = w.with_bit(pos, true);
    for (int pos = 0; pos < tag.width(); ++pos)
        if (tag.bit(pos))
            w = w.with_bit(payload.width() + pos, true);
    return w;
}

BitString slice(const BitString& w, int from, int len)
{
    BitString out = BitString::zeros(len);
    for (int pos = 0; pos < len; ++pos)
        if (w.bit(from + pos))
            out = out.with_bit(pos, true);
    return out;
}

} // namespace

const char* structure_name(BookStructure s)
{
    switch (s) {
    case BookStructure::Random: return "random";
    case BookStructure::MinDistance: return "mindist";
    case BookStructure::Tagged: return "tagged";
    }
    return "?";
}

std::uint64_t Codebook::payload_checksum(const BitString& payload, int tag_bits)
{
    if (tag_bits < 1 || tag_bits > 63)
        raise(ErrorCode::Range, "payload_checksum: tag_bits must be in [1, 63]");
    std::uint64_t sum = 0;
    for (int start = 0; start < payload.width(); start += 4) {
        std::uint64_t nibble = 0;
        for (int j = 0; j < 4; ++j) {
            nibble <<= 1;
            if (start + j < payload.width() && payload.bit(start + j))
                nibble |= 1;
        }
        sum += nibble;
    }
    return sum & ((1ULL << tag_bits) - 1);
}

Codebook Codebook::build(int n_bits, int m_bits, BookStructure structure,
                         int param, Rng& rng)
{
    if (n_bits < 1 || n_bits > BitString::kMaxWidth)
        raise(ErrorCode::Range, "codebook n_bits must be in [1, 256]");
    if (m_bits < 0 || m_bits > n_bits)
        raise(ErrorCode::Range, "codebook m_bits must be in [0, n_bits]");
    if (m_bits > kMaxMaterializedBits)
        raise(ErrorCode::Unsupported,
              "codebook with m_bits > 22 cannot be materialized; use "
              "full_space for the m == n baseline");

    Codebook book;
    book.n_bits_ = n_bits;
    book.m_bits_ = m_bits;
    book.structure_ = structure;
    book.param_ = param;
    const std::uint64_t target = 1ULL << m_bits;

    switch (structure) {
    case BookStructure::Random: {
        if (param != 0)
            raise(ErrorCode::InvalidArgument, "random structure takes no parameter");
        if (m_bits == n_bits) {
            for (std::uint64_t v = 0; v < target; ++v)
                book.words_.push_back(BitString::from_value(n_bits, v));
            break;
        }
        std::set<BitString> seen;
        while (book.words_.size() < target) {
            BitString w = BitString::random(n_bits, rng);
            if (seen.insert(w).second)
                book.words_.push_back(w);
        }
        break;
    }
    case BookStructure::MinDistance: {
        const int d = param;
        if (d < 1 || d > n_bits)
            raise(ErrorCode::Range, "min-distance parameter must be in [1, n_bits]");
        // Greedy accumulation of random candidates. A greedy path can wedge
        // on a prefix that admits no further codeword even when the code
        // exists, so a stalled path is restarted; the draw budget is global.
        const std::uint64_t stall_limit =
            std::max<std::uint64_t>(4096, 8ULL << std::min(n_bits, 20));
        std::uint64_t draws = 0;
        std::uint64_t since_progress = 0;
        while (book.words_.size() < target) {
            if (draws >= kMinDistanceBudget)
                raise(ErrorCode::Unsatisfiable,
                      "min-distance codebook (n=" + std::to_string(n_bits) +
                          ", m=" + std::to_string(m_bits) +
                          ", d=" + std::to_string(d) + ") not found within " +
                          std::to_string(kMinDistanceBudget) +
                          " candidate draws");
            if (since_progress >= stall_limit) {
                book.words_.clear();
                since_progress = 0;
            }
            ++draws;
            ++since_progress;
            BitString cand = BitString::random(n_bits, rng);
            bool ok = true;
            for (const BitString& w : book.words_)
                if (hamming_distance(cand, w) < d) {
                    ok = false;
                    break;
                }
            if (ok) {
                book.words_.push_back(cand);
                since_progress = 0;
            }
        }
        break;
    }
    case BookStructure::Tagged: {
        const int tag_bits = param;
        if (tag_bits < 1 || tag_bits >= n_bits || tag_bits > 63)
            raise(ErrorCode::Range, "tag_bits must be in [1, min(n_bits-1, 63)]");
        const int payload_bits = n_bits - tag_bits;
        if (m_bits > payload_bits)
            raise(ErrorCode::Range,
                  "tagged book needs m_bits <= n_bits - tag_bits distinct payloads");
        std::set<BitString> seen;
        while (book.words_.size() < target) {
            BitString payload = BitString::random(payload_bits, rng);
            if (!seen.insert(payload).second)
                continue;
            const std::uint64_t tag = payload_checksum(payload, tag_bits);
            book.words_.push_back(
                concat_payload_tag(payload, BitString::from_value(tag_bits, tag)));
        }
        break;
    }
    }
    book.rebuild_index();
    return book;
}

Codebook Codebook::full_space(int n_bits)
{
    if (n_bits < 1 || n_bits > 64)
        raise(ErrorCode::Range, "full_space supports n_bits in [1, 64]");
    Codebook book;
    book.n_bits_ = n_bits;
    book.m_bits_ = n_bits;
    book.structure_ = BookStructure::Random;
    book.implicit_full_ = true;
    return book;
}

void Codebook::rebuild_index()
{
    index_.clear();
    index_.reserve(words_.size());
    for (std::uint64_t i = 0; i < words_.size(); ++i)
        index_.emplace_back(words_[i].hash_key(), i);
    std::sort(index_.begin(), index_.end());
}

BitString Codebook::word(std::uint64_t index) const
{
    if (index >= size())
        raise(ErrorCode::Range, "codebook word index out of range");
    if (implicit_full_)
        return BitString::from_value(n_bits_, index);
    return words_[index];
}

std::optional<std::uint64_t> Codebook::index_of(const BitString& w) const
{
    if (w.width() != n_bits_)
        return std::nullopt;
    if (implicit_full_)
        return n_bits_ <= 64 ? std::optional<std::uint64_t>(w.low_u64())
                             : std::nullopt;
    const std::uint64_t key = w.hash_key();
    auto it = std::lower_bound(index_.begin(), index_.end(),
                               std::make_pair(key, std::uint64_t{0}));
    for (; it != index_.end() && it->first == key; ++it)
        if (words_[it->second] == w)
            return it->second;
    return std::nullopt;
}

bool Codebook::contains(const BitString& w) const
{
    return index_of(w).has_value();
}

const std::vector<BitString>& Codebook::words() const
{
    if (implicit_full_)
        raise(ErrorCode::Unsupported, "implicit full-space book has no word list");
    return words_;
}

bool Codebook::tag_valid(const BitString& w) const
{
    if (structure_ != BookStructure::Tagged)
        raise(ErrorCode::InvalidArgument, "tag_valid requires a tagged book");
    if (w.width() != n_bits_)
        return false;
    const int payload_bits = n_bits_ - param_;
    const BitString payload = slice(w, 0, payload_bits);
    const BitString tag = slice(w, payload_bits, param_);
    return tag.low_u64() == payload_checksum(payload, param_);
}

void Codebook::write(std::ostream& out) const
{
    if (implicit_full_)
        raise(ErrorCode::Unsupported, "implicit full-space book cannot be saved");
    out << "sparrow-codebook n=" << n_bits_ << " m=" << m_bits_
        << " structure=" << structure_name(structure_) << " param=" << param_
        << "\n";
    for (const BitString& w : words_)
        out << w.to_string() << "\n";
}

void Codebook::save(const std::string& path) const
{
    std::ofstream out(path);
    if (!out)
        raise(ErrorCode::Io, "cannot open codebook file for writing: " + path);
    write(out);
    if (!out.good())
        raise(ErrorCode::Io, "failed writing codebook file: " + path);
}

Codebook Codebook::read(std::istream& in)
{
    std::string header;
    if (!std::getline(in, header))
        raise(ErrorCode::Io, "empty codebook stream");
    std::istringstream hs(header);
    std::string magic;
    hs >> magic;
    if (magic != "sparrow-codebook")
        raise(ErrorCode::InvalidArgument, "not a codebook file");
    int n = -1, m = -1, param = 0;
    std::string structure_str;
    std::string field;
    while (hs >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos)
            raise(ErrorCode::InvalidArgument, "bad codebook header field: " + field);
        const std::string key = field.substr(0, eq);
        const std::string val = field.substr(eq + 1);
        if (key == "n")
            n = std::stoi(val);
        else if (key == "m")
            m = std::stoi(val);
        else if (key == "structure")
            structure_str = val;
        else if (key == "param")
            param = std::stoi(val);
        else
            raise(ErrorCode::InvalidArgument, "unknown codebook header key: " + key);
    }
    BookStructure structure;
    if (structure_str == "random")
        structure = BookStructure::Random;
    else if (structure_str == "mindist")
        structure = BookStructure::MinDistance;
    else if (structure_str == "tagged")
        structure = BookStructure::Tagged;
    else
        raise(ErrorCode::InvalidArgument,
              "unknown codebook structure: " + structure_str);
    if (n < 1 || n > BitString::kMaxWidth || m < 0 || m > kMaxMaterializedBits)
        raise(ErrorCode::Range, "codebook header out of range");

    Codebook book;
    book.n_bits_ = n;
    book.m_bits_ = m;
    book.structure_ = structure;
    book.param_ = param;
    const std::uint64_t target = 1ULL << m;
    std::set<BitString> seen;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        BitString w = BitString::from_string(line);
        if (w.width() != n)
            raise(ErrorCode::InvalidArgument, "codeword width does not match header");
        if (!seen.insert(w).second)
            raise(ErrorCode::InvalidArgument, "duplicate codeword in file");
        book.words_.push_back(w);
    }
    if (book.words_.size() != target)
        raise(ErrorCode::InvalidArgument,
              "codebook file holds " + std::to_string(book.words_.size()) +
                  " words, header says " + std::to_string(target));
    // Structure properties are revalidated where cheap.
    if (structure == BookStructure::MinDistance && m <= 12) {
        for (std::size_t i = 0; i < book.words_.size(); ++i)
            for (std::size_t j = i + 1; j < book.words_.size(); ++j)
                if (hamming_distance(book.words_[i], book.words_[j]) < param)
                    raise(ErrorCode::InvalidArgument,
                          "codebook violates its min-distance header");
    }
    if (structure == BookStructure::Tagged) {
        book.rebuild_index();
        for (const BitString& w : book.words_)
            if (!book.tag_valid(w))
                raise(ErrorCode::InvalidArgument, "codeword fails its tag checksum");
        return book;
    }
    book.rebuild_index();
    return book;
}

Codebook Codebook::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        raise(ErrorCode::Io, "cannot open codebook file: " + path);
    return read(in);
}

} // namespace sparrow
