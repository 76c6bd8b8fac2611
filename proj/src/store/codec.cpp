// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "codec.hpp"

namespace shoplist::store::detail {
namespace {

enum : std::uint8_t {
    kTagNull = 0,
    kTagInteger = 1,
    kTagDecimal = 2,
    kTagText = 3,
    kTagBoolean = 4,
    kTagTimestamp = 5,
};

enum : std::uint8_t {
    kFlagNullable = 1 << 0,
    kFlagPrimaryKey = 1 << 1,
    kFlagUnique = 1 << 2,
    kFlagNonNegative = 1 << 3,
    kFlagDefaultNow = 1 << 4,
    kFlagHasDefault = 1 << 5,
};

} // namespace

void ByteWriter::value(const Value& v) {
    struct Visitor {
        ByteWriter& w;
        void operator()(Null) const { w.u8(kTagNull); }
        void operator()(std::int64_t i) const { w.u8(kTagInteger); w.i64(i); }
        void operator()(Decimal d) const { w.u8(kTagDecimal); w.i64(d.scaled()); }
        void operator()(const std::string& s) const { w.u8(kTagText); w.str(s); }
        void operator()(bool b) const { w.u8(kTagBoolean); w.u8(b ? 1 : 0); }
        void operator()(Timestamp t) const { w.u8(kTagTimestamp); w.i64(t.ms); }
    };
    std::visit(Visitor{*this}, v);
}

void ByteWriter::row(const Row& r) {
    for (const auto& v : r.values) value(v);
}

void ByteWriter::table_def(const TableDef& def) {
    str(def.name);
    u16(static_cast<std::uint16_t>(def.columns.size()));
    for (const auto& c : def.columns) {
        str(c.name);
        u8(static_cast<std::uint8_t>(c.kind));
        std::uint8_t flags = 0;
        if (c.nullable) flags |= kFlagNullable;
        if (c.primary_key) flags |= kFlagPrimaryKey;
        if (c.unique) flags |= kFlagUnique;
        if (c.non_negative) flags |= kFlagNonNegative;
        if (c.default_now) flags |= kFlagDefaultNow;
        if (c.default_value) flags |= kFlagHasDefault;
        u8(flags);
        if (c.default_value) value(*c.default_value);
        str(c.references);
    }
}

Value ByteReader::value() {
    switch (u8()) {
    case kTagNull: return Null{};
    case kTagInteger: return i64();
    case kTagDecimal: return Decimal::from_scaled(i64());
    case kTagText: return str();
    case kTagBoolean: return u8() != 0;
    case kTagTimestamp: return Timestamp{i64()};
    default: throw Error(ErrorCode::IoFailure, "corrupt value tag");
    }
}

Row ByteReader::row(std::size_t columns) {
    Row r;
    r.values.reserve(columns);
    for (std::size_t i = 0; i < columns; ++i) r.values.push_back(value());
    return r;
}

TableDef ByteReader::table_def() {
    TableDef def;
    def.name = str();
    auto n = u16();
    def.columns.reserve(n);
    for (std::uint16_t i = 0; i < n; ++i) {
        ColumnDef c;
        c.name = str();
        auto kind = u8();
        if (kind < 1 || kind > 5) throw Error(ErrorCode::IoFailure, "corrupt column kind");
        c.kind = static_cast<ColumnKind>(kind);
        auto flags = u8();
        c.nullable = flags & kFlagNullable;
        c.primary_key = flags & kFlagPrimaryKey;
        c.unique = flags & kFlagUnique;
        c.non_negative = flags & kFlagNonNegative;
        c.default_now = flags & kFlagDefaultNow;
        if (flags & kFlagHasDefault) c.default_value = value();
        c.references = str();
        def.columns.push_back(std::move(c));
    }
    return def;
}

} // namespace shoplist::store::detail
