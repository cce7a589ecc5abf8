#pragma once

#include "blockdiff/numerics.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace blockdiff {

enum class Role : uint8_t {
    PromptText = 0,
    Vision = 1,
    Response = 2,
};

char role_char(Role r);

// A token sequence annotated with per-position roles and turn indices.
// Vision positions carry a continuous payload embedding instead of a
// token id (tokens[i] == -1 there). Within a turn all PromptText and
// Vision positions precede all Response positions.
struct SequenceLayout {
    std::vector<int> tokens;                          // -1 at vision positions
    std::vector<Role> roles;
    std::vector<int> turn;
    std::vector<std::vector<float>> vision_payload;   // one per vision position, in order

    int size() const { return static_cast<int>(tokens.size()); }
    // ordinal of a vision position among all vision positions
    int vision_ordinal(int pos) const;
    void validate() const;
};

struct ResponseSpan {
    int turn = 0;
    int start = 0;   // inclusive
    int end = 0;     // exclusive

    bool operator==(const ResponseSpan &) const = default;
};

// One span per turn that has Response positions, ordered by position.
// A non-contiguous Response run within a turn throws.
std::vector<ResponseSpan> derive_response_spans(const SequenceLayout & layout);

struct BlockPartition {
    std::vector<std::pair<int, int>> blocks;   // half-open [start, end) over positions
    int block_size = 0;
};

// Split every response span into consecutive blocks of block_size; the
// final block of a span is truncated at the span end. Blocks never cross
// turn boundaries.
BlockPartition partition_blocks(const SequenceLayout & layout, int block_size);

enum class CorpusTask {
    KvRetrieval,
    Copy,
    Reverse,
};

const char * task_name(CorpusTask t);
CorpusTask task_from_name(const std::string & name);

// Synthetic corpus configuration. response_len counts the trailing EOS;
// for copy/reverse the response length is derived from the prompt.
struct CorpusConfig {
    int vocab_size = 64;
    int vision_dim = 64;
    std::pair<int, int> num_turns{1, 1};
    std::pair<int, int> prompt_len{4, 8};
    std::pair<int, int> response_len{4, 8};
    std::pair<int, int> vision_slots{0, 0};
    CorpusTask task = CorpusTask::Copy;
    uint64_t seed = 0;

    int mask_id() const { return vocab_size - 1; }
    int eos_id() const { return vocab_size - 2; }
    int content_vocab() const { return vocab_size - 2; }
    void validate() const;
};

std::vector<SequenceLayout> generate_corpus(const CorpusConfig & cfg, int count);

// The generator's own key->value table for a kv-retrieval record; the
// lookup oracle used by tests. One entry per vision slot of the record.
struct KvTableEntry {
    int key = 0;
    std::vector<int> value;
};
std::vector<std::vector<KvTableEntry>> kv_tables_for_record(const CorpusConfig & cfg, int record_index);

// Line-delimited serialization: {tokens, roles, turns, vision_payload_base}
std::string layout_to_json(const SequenceLayout & layout);
SequenceLayout layout_from_json(const std::string & line);
void save_corpus(const std::vector<SequenceLayout> & corpus, const std::string & path);
std::vector<SequenceLayout> load_corpus(const std::string & path);

}   // namespace blockdiff
