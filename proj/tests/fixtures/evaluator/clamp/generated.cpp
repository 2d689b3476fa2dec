int clampIndex (int i, int lo, int hi)
{
    int out = i;
    if (out < lo) out = lo;
    if (out > hi) out = hi;
    ++out;
    return out;
}
