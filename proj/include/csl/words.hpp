#ifndef CSL_WORDS_HPP
#define CSL_WORDS_HPP

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csl {

// Generators of a free group are numbered 1..rank; a negative index denotes
// the inverse of the corresponding generator. Index 0 is never valid.
struct Basis {
    int rank = 0;

    explicit Basis(int r) : rank(r) {
        if (r < 1) throw std::invalid_argument("basis rank must be >= 1");
    }
    Basis() = default;

    bool contains(int letter) const {
        return letter != 0 && letter >= -rank && letter <= rank;
    }
    bool operator==(const Basis& o) const { return rank == o.rank; }
};

// A freely reduced word. The empty word is the identity.
class Word {
  public:
    Word() = default;
    Word(int rank, std::vector<int> letters);

    int rank() const { return rank_; }
    const std::vector<int>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    int letter(std::size_t i) const { return letters_[i]; }

    Word inverse() const;

    bool operator==(const Word& o) const {
        return rank_ == o.rank_ && letters_ == o.letters_;
    }
    bool operator!=(const Word& o) const { return !(*this == o); }

  private:
    int rank_ = 0;
    std::vector<int> letters_;
};

// A cyclically reduced word considered up to rotation. The stored rotation is
// the lexicographically least one (comparing signed letter values), so
// equality of conjugacy classes is structural equality.
class CyclicWord {
  public:
    CyclicWord() = default;
    CyclicWord(int rank, std::vector<int> letters);

    int rank() const { return rank_; }
    const std::vector<int>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    int letter(std::size_t i) const { return letters_[i % letters_.size()]; }

    Word as_word() const { return Word(rank_, letters_); }
    CyclicWord inverse() const;

    bool operator==(const CyclicWord& o) const {
        return rank_ == o.rank_ && letters_ == o.letters_;
    }
    bool operator!=(const CyclicWord& o) const { return !(*this == o); }

  private:
    int rank_ = 0;
    std::vector<int> letters_;
};

struct RootDecomposition {
    CyclicWord root;
    int exponent = 1;  // root^exponent equals the input, exponent maximal
};

enum class CyclicRelation {
    EqualClass,     // conjugate
    InverseClass,   // conjugate to the inverse
    Commensurable,  // roots conjugate up to inversion, but neither of the above
    Distinct,
};

// Free reduction of a raw letter sequence.
Word reduce_word(const std::vector<int>& raw, const Basis& basis);

// Concatenate and reduce.
Word multiply(const Word& u, const Word& v);
// conj * w * conj^-1, reduced.
Word conjugate(const Word& w, const Word& conj);
Word power(const Word& w, int e);

// Splits a nonempty word as w = conjugator * v * conjugator^-1 with v the
// canonical cyclic form of w's conjugacy class.
struct CyclicNormalForm {
    CyclicWord cyclic;
    Word conjugator;
};
CyclicNormalForm cyclic_normal_form(const Word& w);

RootDecomposition root_decomposition(const CyclicWord& v);

CyclicRelation cyclic_compare(const CyclicWord& u, const CyclicWord& v);

// Total order on words: by length, then lexicographic on signed letters.
// Used wherever a deterministic representative has to be chosen.
bool word_less(const Word& a, const Word& b);
bool cyclic_less(const CyclicWord& a, const CyclicWord& b);

// Compact string form: with alphabet base 'a', generators 1..26 print as
// 'a'..'z' and inverses as 'A'..'Z'. The alphabet base shifts the mapping
// (wrapping), so e.g. base 'x' renders generator 1 as 'x'.
std::string render_word(const Word& w, char alphabet = 'a');
std::string render_cyclic(const CyclicWord& w, char alphabet = 'a');
Word parse_word(const std::string& text, int rank, char alphabet = 'a');

std::size_t hash_letters(int rank, const std::vector<int>& letters);

struct WordHash {
    std::size_t operator()(const Word& w) const {
        return hash_letters(w.rank(), w.letters());
    }
};
struct CyclicWordHash {
    std::size_t operator()(const CyclicWord& w) const {
        return hash_letters(w.rank(), w.letters());
    }
};

}  // namespace csl

#endif
