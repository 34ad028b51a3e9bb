//! Shared test data.

pub(crate) const FR_TAGSET: &str = r#"<tagset>
<attrtype name='antepos' type='bool'>
  <true alias='g'/>
</attrtype>
<attrtype name='gender' type='enum'>
  <value name='masculine' alias='m'/>
  <value name='feminine' alias='f'/>
</attrtype>
<attrtype name='number' type='enum'>
  <value name='singular' alias='s'/>
  <value name='plural' alias='p'/>
</attrtype>
<attrtype name='person' type='enum'>
  <value name='1' alias='1'/>
  <value name='2' alias='2'/>
  <value name='3' alias='3'/>
</attrtype>
<attrtype name='tense' type='enum'>
  <value name='present' alias='P'/>
  <value name='imperfect' alias='I'/>
  <value name='infinitive' alias='W'/>
  <value name='pastpart' alias='K'/>
  <value name='prespart' alias='G'/>
</attrtype>
<attrtype name='subcat' type='enum'>
  <value name='human' trait='hum'/>
  <value name='concrete' trait='conc'/>
</attrtype>
<pos name='noun' cutename='N'>
  <attribute name='subcat'/>
  <attribute name='gender' shortcut='yes'/>
  <attribute name='number' shortcut='yes'/>
</pos>
<pos name='adj' cutename='A'>
  <attribute name='antepos' default='false' shortcut='yes'/>
  <attribute name='gender' shortcut='yes'/>
  <attribute name='number' shortcut='yes'/>
</pos>
<pos name='verb' cutename='V'>
  <attribute name='tense' shortcut='yes'/>
  <attribute name='person' shortcut='yes'/>
  <attribute name='gender' shortcut='yes'/>
  <attribute name='number' shortcut='yes'/>
</pos>
<pos name='det' cutename='DET'>
  <attribute name='gender' shortcut='yes'/>
  <attribute name='number' shortcut='yes'/>
</pos>
<pos name='pro' cutename='PRO'>
  <attribute name='gender' shortcut='yes'/>
  <attribute name='number' shortcut='yes'/>
  <attribute name='person' shortcut='yes'/>
</pos>
<pos name='prep' cutename='PREP'/>
<pos name='adv' cutename='ADV'/>
<pos name='conj' cutename='CONJ'/>
<pos name='punct' cutename='PONCT'/>
</tagset>"#;

pub(crate) const FIG1: &str = "La police a saisi 164 procès-verbaux jeudi dernier.";

pub(crate) const FIG1_DELA: &str = "\
la,le.DET:fs
la,.N:ms
police,.N+conc:fs
a,avoir.V:P3s
saisi,saisir.V:Kms
procès,.N:ms:mp
procès-verbaux,procès-verbal.N:mp
jeudi,.N:ms
dernier,.A:ms
dernier,.N+hum:ms
.,.PONCT
";

/// The example sentence segmented and tagged with [`FIG1_DELA`], case
/// folded.
pub(crate) fn fig1() -> (crate::model::Tagset, crate::segment::SegmentedText, crate::text::TaggedText) {
    use crate::lexicon::{build_index, parse_dela, LookupOptions};
    use crate::text::{tag, TagOptions};
    let ts = crate::model::Tagset::parse(FR_TAGSET).unwrap();
    let lex = build_index(&parse_dela(FIG1_DELA, true).unwrap().entries, Some(&ts), 0, "fr").unwrap();
    let seg = crate::segment::segment(FIG1, crate::segment::SourceFormat::Plain);
    let options = TagOptions {
        lookup: LookupOptions {
            fold_case: true,
            fold_diacritics: false,
        },
    };
    let tagged = tag(&seg, &[&lex], options).unwrap();
    (ts, seg, tagged)
}
